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
#include "qgauge/linalg.hpp"

namespace qgauge {
namespace {

TEST(Hermitian, RejectsSkewAndNonSquare) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(0, 1) = cplx(0.0, 1.0);
  EXPECT_THROW(Hermitian{m}, std::invalid_argument);
  EXPECT_THROW(Hermitian{CMatrix(2, 3)}, std::invalid_argument);
  m(1, 0) = cplx(0.0, -1.0);
  EXPECT_NO_THROW(Hermitian{m});
}

TEST(Hermitian, SymmetrizesWithinTolerance) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(0, 1) = 1e-13;
  const Hermitian h(m);
  EXPECT_EQ(h.matrix(), h.matrix().adjoint());
}

TEST(DensityMatrix, ValidatesTraceAndPositivity) {
  EXPECT_THROW(DensityMatrix({2}, CMatrix::Identity(2, 2)), std::invalid_argument);
  CMatrix bad(2, 2);
  bad << 1.5, 0, 0, -0.5;
  EXPECT_THROW(DensityMatrix({2}, bad), std::invalid_argument);
  EXPECT_THROW(DensityMatrix({3}, CMatrix::Identity(2, 2) / 2.0), std::invalid_argument);
  EXPECT_NO_THROW(DensityMatrix::maximally_mixed({2, 3}));
}

TEST(StateVector, RejectsUnnormalized) {
  CVector v(2);
  v << 1.0, 1.0;
  EXPECT_THROW(StateVector({2}, v), std::invalid_argument);
  EXPECT_NEAR(StateVector::normalized({2}, v).amplitudes().norm(), 1.0, 1e-15);
  EXPECT_THROW(StateVector::normalized({2}, CVector::Zero(2)), std::invalid_argument);
}

TEST(Sampling, DeterministicAndNormalized) {
  const StateVector a = sample_pure({3, 2}, 42), b = sample_pure({3, 2}, 42), c = sample_pure({3, 2}, 43);
  EXPECT_EQ(a.amplitudes(), b.amplitudes());
  EXPECT_NE(a.amplitudes(), c.amplitudes());
  EXPECT_NEAR(a.amplitudes().norm(), 1.0, 1e-14);
  const DensityMatrix rho = sample_mixed({4}, 2, 7);
  EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
  const RVector ev = hermitian_eig(rho.op()).values;
  EXPECT_GT(ev(1), 1e-6);
  EXPECT_NEAR(ev(2), 0.0, 1e-12);
}

TEST(Spectral, EigenvaluesNonincreasingAndReconstruct) {
  const Hermitian h = sample_hermitian(5, 3);
  const SpectralDecomposition sd = hermitian_eig(h);
  for (int i = 1; i < 5; ++i) EXPECT_GE(sd.values(i - 1), sd.values(i));
  const CMatrix back = sd.vectors * sd.values.cast<cplx>().asDiagonal() * sd.vectors.adjoint();
  EXPECT_LT((back - h.matrix()).norm(), 1e-12);
  EXPECT_NEAR(min_eigenvalue(h.matrix()), sd.values(4), 1e-12);
  EXPECT_NEAR(max_eigenvalue(h.matrix()), sd.values(0), 1e-12);
  const CMatrix p = h.matrix() * h.matrix();
  const CMatrix r = sqrt_psd(p);
  EXPECT_LT((r * r - p).norm(), 1e-10);
}

TEST(PartialTranspose, ProductOperatorTransposesFactor) {
  std::mt19937_64 rng(5);
  const CMatrix a = oracle::random_density(2, 2, rng), b = oracle::random_density(3, 3, rng);
  const Hermitian pt = partial_transpose(kron(a, b), {2, 3}, 1);
  EXPECT_LT((pt.matrix() - kron(a, CMatrix(b.transpose()))).norm(), 1e-14);
  const Hermitian pt0 = partial_transpose(kron(a, b), {2, 3}, 0);
  EXPECT_LT((pt0.matrix() - kron(CMatrix(a.transpose()), b)).norm(), 1e-14);
  EXPECT_THROW(partial_transpose(kron(a, b), {2, 3}, 2), std::invalid_argument);
}

TEST(PartialTranspose, MatchesIndexSwapOracleOnPureStates) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    const CVector psi = oracle::haar(6, rng);
    const DensityMatrix rho(StateVector({2, 3}, psi, 1e-12));
    const double neg = (trace_norm(partial_transpose(rho, 1)) - 1.0) / 2.0;
    EXPECT_NEAR(neg, oracle::negativity_pt(psi, 2, 3), 1e-12);
  }
}

TEST(PartialTrace, RecoversFactorsOfProduct) {
  std::mt19937_64 rng(6);
  const CMatrix a = oracle::random_density(2, 2, rng), b = oracle::random_density(3, 2, rng),
                c = oracle::random_density(2, 1, rng);
  const CMatrix abc = kron(kron(a, b), c);
  const Dims dims = {2, 3, 2};
  EXPECT_LT((partial_trace(abc, dims, {0}) - a).norm(), 1e-13);
  EXPECT_LT((partial_trace(abc, dims, {1}) - b).norm(), 1e-13);
  EXPECT_LT((partial_trace(abc, dims, {2, 0}) - kron(a, c)).norm(), 1e-13);
  EXPECT_LT((partial_trace(abc, dims, {0, 1, 2}) - abc).norm(), 1e-13);
  EXPECT_THROW(partial_trace(abc, dims, {}), std::invalid_argument);
  EXPECT_THROW(partial_trace(abc, dims, {3}), std::invalid_argument);
}

TEST(Schmidt, ReconstructsAndMatchesReducedSpectrum) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const StateVector psi = sample_pure({3, 4}, seed);
    const SchmidtData sd = schmidt_decompose(psi, 3, 4);
    EXPECT_LT((sd.reconstruct() - psi.amplitudes()).norm(), 1e-12);
    EXPECT_NEAR(sd.coefficients.squaredNorm(), 1.0, 1e-12);
    EXPECT_LT((sd.left.adjoint() * sd.left - CMatrix::Identity(3, 3)).norm(), 1e-12);
    const RVector red = hermitian_eig(partial_trace(psi.projector(), {3, 4}, {0})).values;
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(sd.coefficients(i) * sd.coefficients(i), red(i), 1e-12);
  }
}

TEST(Schmidt, ProductStateHasOneCoefficient) {
  const CVector a = sample_pure({2}, 1).amplitudes(), b = sample_pure({3}, 2).amplitudes();
  const SchmidtData sd = schmidt_decompose(kron(a, b), 2, 3);
  EXPECT_NEAR(sd.coefficients(0), 1.0, 1e-12);
  EXPECT_NEAR(sd.coefficients(1), 0.0, 1e-7);
  EXPECT_LT((sd.reconstruct() - kron(a, b)).norm(), 1e-12);
}

TEST(Fidelity, CommutingAndPureCases) {
  CMatrix p = CMatrix::Zero(3, 3), q = CMatrix::Zero(3, 3);
  p.diagonal() << 0.5, 0.3, 0.2;
  q.diagonal() << 0.1, 0.6, 0.3;
  EXPECT_NEAR(root_fidelity(p, q), std::sqrt(0.05) + std::sqrt(0.18) + std::sqrt(0.06), 1e-12);
  const StateVector a = sample_pure({3}, 1), b = sample_pure({3}, 2);
  EXPECT_NEAR(root_fidelity(a.projector(), b.projector()), std::abs(a.amplitudes().dot(b.amplitudes())), 1e-7);
  EXPECT_NEAR(root_fidelity(p, p), 1.0, 1e-12);
}

TEST(Mixing, AsPureDetectsRankOne) {
  const StateVector a = sample_pure({2}, 3);
  const DensityMatrix rho(a);
  const auto back = as_pure(rho);
  ASSERT_TRUE(back.has_value());
  EXPECT_NEAR(std::abs(back->amplitudes().dot(a.amplitudes())), 1.0, 1e-12);
  EXPECT_FALSE(as_pure(mix(rho, DensityMatrix::maximally_mixed({2}), 0.5)).has_value());
  EXPECT_THROW(mix(rho, DensityMatrix::maximally_mixed({3}), 0.5), std::invalid_argument);
}

}  // namespace
}  // namespace qgauge
