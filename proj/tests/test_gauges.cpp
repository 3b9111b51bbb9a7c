// Copyright 2026 The qgauge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qgauge/gauges.hpp"
#include "qgauge/theories.hpp"

namespace qgauge {
namespace {

RVector random_magnitudes(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RVector a(d);
  for (int i = 0; i < d; ++i) a(i) = u(rng);
  // Ties and zeros exercise the split search.
  if (d > 2 && rng() % 4 == 0) a(1) = a(0);
  if (d > 3 && rng() % 4 == 0) a(d - 1) = 0.0;
  return a;
}

TEST(KSupport, EndpointsAreL1AndL2) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const RVector a = random_magnitudes(5, rng);
    EXPECT_NEAR(ksupport_norm(a, 1), a.sum(), 1e-12);
    EXPECT_NEAR(ksupport_norm(a, 5), a.norm(), 1e-12);
    EXPECT_NEAR(ksupport_dual(a, 1), a.maxCoeff(), 1e-15);
  }
}

TEST(KSupport, MatchesDualBallAndVariationalOracles) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const int d = 1 + static_cast<int>(rng() % 7);
    const RVector a = random_magnitudes(d, rng);
    for (int k = 1; k <= d; ++k) {
      const double v = ksupport_norm(a, k);
      const oracle::DualPoint dp = oracle::ksupport_dual_ball(a, k);
      EXPECT_NEAR(v, dp.value, 1e-10) << "d=" << d << " k=" << k;
      EXPECT_LE(oracle::topk_l2(dp.s, k), 1.0 + 1e-12);
      EXPECT_NEAR(a.dot(dp.s), dp.value, 1e-12);
      EXPECT_NEAR(v, oracle::ksupport_variational(a, k), 1e-9);
    }
  }
}

TEST(KSupport, NonincreasingInKAndPhaseBlind) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const CVector x = oracle::haar(6, rng);
    for (int k = 2; k <= 6; ++k) EXPECT_LE(ksupport_norm(x, k), ksupport_norm(x, k - 1) + 1e-14);
    CVector y = x;
    for (int i = 0; i < 6; ++i) y(i) *= std::polar(1.0, 0.3 * i);
    EXPECT_NEAR(ksupport_norm(x, 3), ksupport_norm(y, 3), 1e-14);
    // Dual pairing: <x, x> <= norm * dual norm.
    EXPECT_LE(1.0, ksupport_norm(x, 3) * ksupport_dual(x, 3) + 1e-12);
  }
}

TEST(KSupport, RejectsInvalidK) {
  const RVector ones = RVector::Ones(3);
  EXPECT_THROW(ksupport_norm(ones, 0), std::invalid_argument);
  EXPECT_THROW(ksupport_norm(ones, 4), std::invalid_argument);
  EXPECT_THROW(ksupport_dual(ones, 4), std::invalid_argument);
}

TEST(KSupport, SparseVectorsHaveUnitNorm) {
  CVector x = CVector::Zero(5);
  x(1) = cplx(0.6, 0.0);
  x(3) = cplx(0.0, 0.8);
  EXPECT_NEAR(ksupport_norm(x, 2), 1.0, 1e-14);
  EXPECT_NEAR(ksupport_norm(x, 1), 1.4, 1e-14);
  EXPECT_EQ(coherence_rank(x), 2);
}

TEST(Negativity, PureFormulaMatchesPartialTranspose) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const CVector psi = oracle::haar(9, rng);
    EXPECT_NEAR(pure_negativity(StateVector({3, 3}, psi, 1e-12), 3, 3), oracle::negativity_pt(psi, 3, 3), 1e-10);
  }
  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(pure_negativity(StateVector({2, 2}, bell), 2, 2), 0.5, 1e-14);
}

TEST(Schmidt, GaugeOfMaximallyEntangled) {
  for (int d = 2; d <= 4; ++d) {
    CVector phi = CVector::Zero(d * d);
    for (int i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    const StateVector psi({d, d}, phi);
    for (int k = 1; k <= d; ++k) {
      // Uniform coefficients 1/sqrt(d): the k-support norm is sqrt(d / k).
      EXPECT_NEAR(schmidt_gauge(psi, d, d, k), std::sqrt(static_cast<double>(d) / k), 1e-12);
      EXPECT_NEAR(pure_polar(psi, TheoryDescriptor::schmidt(d, d, k)), static_cast<double>(k) / d, 1e-12);
    }
  }
}

TEST(Genuine, BiseparableHasUnitGauge) {
  const CVector a = sample_pure({2}, 1).amplitudes(), bc = sample_pure({4}, 2).amplitudes();
  const StateVector psi({2, 2, 2}, kron(a, bc), 1e-12);
  EXPECT_NEAR(genuine_gauge(psi, {2, 2, 2}), 1.0, 1e-7);
  CVector ghz = CVector::Zero(8);
  ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(genuine_gauge(StateVector({2, 2, 2}, ghz), {2, 2, 2}), std::sqrt(2.0), 1e-12);
  EXPECT_EQ(bipartitions(3).size(), 3u);
  EXPECT_EQ(bipartitions(4).size(), 7u);
}

TEST(Magic, StabilizerStatesHaveUnitGauge) {
  const TheoryDescriptor th = TheoryDescriptor::magic(2);
  for (const StateVector& s : stabilizer_set(2).states) {
    EXPECT_NEAR(pure_polar(s, th), 1.0, 1e-12);
  }
  const StateVector t = t_state(1);
  EXPECT_NEAR(pure_gauge(t, TheoryDescriptor::magic(1)) * pure_gauge(t, TheoryDescriptor::magic(1)), 3.0 - std::sqrt(3.0),
              1e-7);
}

TEST(Magic, DecompositionReconstructsState) {
  const StateVector psi = sample_pure({2, 2}, 9);
  const L1Result r = magic_decomposition(psi.amplitudes(), 2);
  ASSERT_EQ(r.status, SolveStatus::converged);
  EXPECT_LT((stabilizer_set(2).dictionary * r.x - psi.amplitudes()).norm(), 1e-9);
  EXPECT_NEAR(r.x.cwiseAbs().sum(), r.value, 1e-12);
  EXPECT_LE(r.gap(), 1e-9 * (1.0 + r.value));
  // Dual feasibility: every stabilizer overlap of y is at most 1.
  EXPECT_LE((stabilizer_set(2).dictionary.adjoint() * r.y).cwiseAbs().maxCoeff(), 1.0 + 1e-12);
}

TEST(PureGauge, PolarIdentityOnFreeStates) {
  // Gamma(psi) >= 1 / sqrt(polar) with equality for free states.
  for (const TheoryDescriptor& th : {TheoryDescriptor::coherence(4, 2), TheoryDescriptor::schmidt(3, 3, 2)}) {
    for (std::uint64_t s = 1; s <= 20; ++s) {
      const StateVector psi = sample_pure(th.state_dims(), s);
      const double g = pure_gauge(psi, th), p = pure_polar(psi, th);
      EXPECT_GE(g * std::sqrt(p), 1.0 - 1e-12);
      EXPECT_GE(g, 1.0 - 1e-12);
      EXPECT_NEAR(geometric_pure(psi, th), 1.0 - p, 1e-14);
    }
  }
}

}  // namespace
}  // namespace qgauge
