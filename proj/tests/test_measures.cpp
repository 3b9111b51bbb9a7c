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
#include "qgauge/measures.hpp"

namespace qgauge {
namespace {

const double kRoot3 = std::sqrt(3.0);

DensityMatrix qubit(std::mt19937_64& rng) { return DensityMatrix({2}, oracle::random_density(2, 2, rng)); }

RVector bloch(const CMatrix& rho) {
  RVector r(3);
  r << 2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real();
  return r;
}

TEST(Magic, GoldenValuesOfTState) {
  const TheoryDescriptor th = TheoryDescriptor::magic(1);
  const DensityMatrix rho(t_state(1));
  const MeasureResult rg = generalized_robustness(rho, th);
  const MeasureResult rs = standard_robustness(rho, th);
  EXPECT_NEAR(rg.value, 2.0 - kRoot3, 1e-7);
  EXPECT_NEAR(rs.value, (kRoot3 - 1.0) / 2.0, 1e-9);
  EXPECT_EQ(rg.status, MeasureStatus::ok);
  EXPECT_EQ(rs.status, MeasureStatus::ok);
  EXPECT_NEAR(base_gauge(rho, th).value, kRoot3, 1e-9);
  EXPECT_NEAR(log_generalized_robustness(rho, th).value, std::log2(3.0 - kRoot3), 1e-7);
  EXPECT_NEAR(random_robustness(rho, th).value, kRoot3 - 1.0, 1e-9);
  EXPECT_NEAR(best_free_approximation(rho, th).value, 1.0, 1e-5);
  EXPECT_NEAR(nuclear_gauge(rho, th).value, 3.0 - kRoot3, 1e-6);
  EXPECT_NEAR(geometric_measure(rho, th).value, 1.0 - (1.0 + 1.0 / kRoot3) / 2.0, 1e-12);
}

TEST(Magic, RandomRobustnessIsOctahedronExcess) {
  // Stabilizer polytope of a qubit: |x| + |y| + |z| <= 1 on the Bloch vector.
  const TheoryDescriptor th = TheoryDescriptor::magic(1);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix rho = qubit(rng);
    const double excess = std::max(0.0, bloch(rho.matrix()).lpNorm<1>() - 1.0);
    EXPECT_NEAR(random_robustness(rho, th).value, excess, 1e-8);
    EXPECT_EQ(free_membership(rho, th).inside, excess == 0.0);
  }
}

TEST(Magic, FreeStatesVanish) {
  const TheoryDescriptor th = TheoryDescriptor::magic(2);
  const auto poly = build_polytope(th);
  CMatrix rho = 0.5 * poly.projector(3) + 0.3 * poly.projector(20) + 0.2 * poly.projector(41);
  const DensityMatrix r({2, 2}, rho);
  EXPECT_EQ(standard_robustness(r, th).value, 0.0);
  EXPECT_EQ(generalized_robustness(r, th).value, 0.0);
  EXPECT_EQ(modified_trace_distance(r, th).value, 0.0);
  EXPECT_EQ(best_free_approximation(r, th).value, 0.0);
  EXPECT_EQ(nuclear_gauge(r, th).value, 1.0);
}

TEST(Magic, WitnessesAreFeasibleAndTight) {
  const TheoryDescriptor th = TheoryDescriptor::magic(1);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const DensityMatrix rho = mix(qubit(rng), DensityMatrix(t_state(1)), 0.7);
    const MeasureResult rg = generalized_robustness(rho, th);
    ASSERT_TRUE(rg.witness.has_value());
    const WitnessCheck wc = witness_validate(*rg.witness, rho, th, WitnessKind::generalized);
    EXPECT_TRUE(wc.feasible());
    EXPECT_NEAR(wc.bound, rg.value, 1e-5);
    const MeasureResult rs = standard_robustness(rho, th);
    const WitnessCheck ws = witness_validate(*rs.witness, rho, th, WitnessKind::standard);
    EXPECT_TRUE(ws.feasible());
    EXPECT_NEAR(ws.bound, rs.value, 1e-6);
    // Ordering: MTD <= R_g <= R_s.
    EXPECT_LE(modified_trace_distance(rho, th).value, rg.value + 1e-6);
    EXPECT_LE(rg.value, rs.value + 1e-6);
  }
}

TEST(Coherence, QubitClosedForms) {
  // Qubit coherence: R_g = l1 coherence 2|rho01|, geometric (1 - sqrt(1 - 4|rho01|^2)) / 2,
  // nuclear gauge the entrywise l1 norm.
  const TheoryDescriptor th = TheoryDescriptor::coherence(2, 1);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const DensityMatrix rho = qubit(rng);
    const double c = std::abs(rho.matrix()(0, 1));
    // The default certificate is 1e-5; ask for a tighter one to resolve 1e-6.
    MeasureOptions tight;
    tight.certify_tol = 1e-8;
    const MeasureResult rg = generalized_robustness(rho, th, tight);
    EXPECT_EQ(rg.status, MeasureStatus::ok);
    EXPECT_NEAR(rg.value, 2.0 * c, 1e-6);
    EXPECT_LE(rg.lower, 2.0 * c + 1e-9);
    EXPECT_GE(rg.upper, 2.0 * c - 1e-9);
    const MeasureResult g = geometric_measure(rho, th);
    EXPECT_NEAR(g.value, (1.0 - std::sqrt(1.0 - 4.0 * c * c)) / 2.0, 1e-6);
    EXPECT_NEAR(nuclear_gauge(rho, th).value, 1.0 + 2.0 * c, 1e-7);
    // Off-diagonal terms are outside the span of incoherent states.
    EXPECT_EQ(standard_robustness(rho, th).status, MeasureStatus::infinite);
  }
}

TEST(Coherence, NuclearIsEntrywiseL1) {
  const TheoryDescriptor th = TheoryDescriptor::coherence(4, 1);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 5; ++t) {
    const DensityMatrix rho({4}, oracle::random_density(4, 1 + t % 4, rng));
    const MeasureResult r = nuclear_gauge(rho, th);
    EXPECT_NEAR(r.value, rho.matrix().cwiseAbs().sum(), 1e-6);
    EXPECT_EQ(r.status, MeasureStatus::ok);
  }
}

TEST(Coherence, PureRouteAgreement) {
  for (int k = 1; k <= 3; ++k) {
    const TheoryDescriptor th = TheoryDescriptor::coherence(5, k);
    for (std::uint64_t s = 1; s <= 10; ++s) {
      const DensityMatrix rho(sample_pure({5}, s));
      MeasureOptions closed, solver;
      closed.route = Route::closed_form;
      solver.route = Route::solver;
      const MeasureResult a = generalized_robustness(rho, th, closed), b = generalized_robustness(rho, th, solver);
      // k = 1 runs the cutting plane, certified to 1e-5.
      EXPECT_NEAR(a.value, b.value, 1e-5);
      const double g = ksupport_norm(sample_pure({5}, s).amplitudes(), k);
      EXPECT_NEAR(a.value, g * g - 1.0, 1e-9);
    }
  }
}

TEST(Schmidt, PureRouteAgreementAndMixedUnsupported) {
  const TheoryDescriptor th = TheoryDescriptor::schmidt(3, 3, 2);
  MeasureOptions solver;
  solver.route = Route::solver;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const DensityMatrix rho(sample_pure({3, 3}, s));
    EXPECT_NEAR(generalized_robustness(rho, th).value, generalized_robustness(rho, th, solver).value, 1e-9);
    const MeasureResult r = generalized_robustness(rho, th);
    const WitnessCheck wc = witness_validate(*r.witness, rho, th, WitnessKind::generalized);
    EXPECT_GE(wc.identity_residual, -1e-9);
    EXPECT_NEAR(wc.bound, r.value, 1e-9);
  }
  EXPECT_THROW(generalized_robustness(DensityMatrix::maximally_mixed({3, 3}), th), UnsupportedError);
  EXPECT_THROW(base_gauge(DensityMatrix::maximally_mixed({3, 3}), th), UnsupportedError);
}

TEST(Negativity, BellAndWerner) {
  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix b(StateVector({2, 2}, bell));
  EXPECT_NEAR(negativity(b, 2, 2), 0.5, 1e-12);
  // Werner p |bell><bell| + (1 - p) I / 4: negativity max(0, (3p - 1) / 4).
  for (double p : {0.1, 0.3, 0.6, 0.9}) {
    const DensityMatrix w = mix(DensityMatrix::maximally_mixed({2, 2}), b, p);
    EXPECT_NEAR(negativity(w, 2, 2), std::max(0.0, (3.0 * p - 1.0) / 4.0), 1e-12);
  }
}

TEST(Polar, RankOneMatchesPurePolar) {
  for (const TheoryDescriptor& th : {TheoryDescriptor::coherence(4, 2), TheoryDescriptor::schmidt(2, 3, 1),
                                     TheoryDescriptor::magic(2)}) {
    const StateVector psi = sample_pure(th.state_dims(), 5);
    const PolarResult p = polar_gauge_psd(CMatrix(0.7 * psi.projector()), th);
    EXPECT_NEAR(p.value, 0.7 * pure_polar(psi, th), 1e-12);
    EXPECT_FALSE(p.heuristic);
  }
  EXPECT_THROW(polar_gauge_psd(-CMatrix::Identity(2, 2), TheoryDescriptor::magic(1)), std::invalid_argument);
}

TEST(Polar, CoherenceSubsetsOfMixedInput) {
  std::mt19937_64 rng(6);
  const CMatrix p = oracle::random_density(4, 3, rng);
  double best = 0.0;
  oracle::for_each_subset(4, 2, [&](const std::vector<int>& idx) {
    CMatrix s(2, 2);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) s(a, b) = p(idx[a], idx[b]);
    }
    best = std::max(best, Eigen::SelfAdjointEigenSolver<CMatrix>(s).eigenvalues()(1));
  });
  EXPECT_NEAR(polar_gauge_psd(p, TheoryDescriptor::coherence(4, 2)).value, best, 1e-12);
}

TEST(Geometric, FidelityGradientMatchesFiniteDifference) {
  const TheoryDescriptor th = TheoryDescriptor::magic(1);
  const auto poly = build_polytope(th);
  std::mt19937_64 rng(7);
  const CMatrix rho = oracle::random_density(2, 2, rng);
  const detail::FidelityObjective obj{sqrt_psd(rho), &poly};
  RVector x(6);
  x << 0.1, 0.2, 0.15, 0.25, 0.2, 0.1;
  const RVector g = obj.gradient(x);
  for (int i = 0; i < 6; ++i) {
    const double h = 1e-6;
    RVector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    EXPECT_NEAR(g(i), (obj.value(xp) - obj.value(xm)) / (2.0 * h), 1e-6);
  }
  // The value is the root fidelity with sigma = sum x_i |v_i><v_i|.
  CMatrix sigma = CMatrix::Zero(2, 2);
  for (int i = 0; i < 6; ++i) sigma += x(i) * poly.projector(i);
  EXPECT_NEAR(obj.value(x), root_fidelity(rho, sigma), 1e-10);
}

TEST(Geometric, MixedQubitMagicMatchesOctahedronSearch) {
  // F^2 for qubits: tr(rho sigma) + 2 sqrt(det rho det sigma); sigma over the octahedron.
  const TheoryDescriptor th = TheoryDescriptor::magic(1);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 3; ++t) {
    const DensityMatrix rho = mix(qubit(rng), DensityMatrix(t_state(1)), 0.8);
    const RVector r = bloch(rho.matrix());
    const double det_r = (1.0 - r.squaredNorm()) / 4.0;
    double best = 0.0;
    const int n = 600;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; i + j <= n; ++j) {
        RVector s(3);
        s << static_cast<double>(i) / n, static_cast<double>(j) / n, static_cast<double>(n - i - j) / n;
        for (int k = 0; k < 3; ++k) s(k) *= r(k) < 0 ? -1.0 : 1.0;  // face facing r
        const double f2 = (1.0 + r.dot(s)) / 2.0 + 2.0 * std::sqrt(std::max(0.0, det_r * (1.0 - s.squaredNorm()) / 4.0));
        best = std::max(best, f2);
      }
    }
    const MeasureResult g = geometric_measure(rho, th);
    EXPECT_EQ(g.status, MeasureStatus::ok);
    EXPECT_LE(g.value, 1.0 - best + 1e-9);
    EXPECT_NEAR(g.value, 1.0 - best, 1e-4);
  }
}

TEST(Geometric, SolverRouteOnPureInputMatchesClosedForm) {
  const TheoryDescriptor th = TheoryDescriptor::magic(2);
  MeasureOptions solver;
  solver.route = Route::solver;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const DensityMatrix rho(sample_pure({2, 2}, s));
    const MeasureResult a = geometric_measure(rho, th), b = geometric_measure(rho, th, solver);
    EXPECT_EQ(b.stats.method, "frank_wolfe");
    EXPECT_NEAR(a.value, b.value, 1e-5);
    EXPECT_LE(fidelity_gap(b), 1e-6);
  }
}

TEST(ConvexRoof, PureEqualsGaugeAndMixedBoundsNuclear) {
  const TheoryDescriptor th = TheoryDescriptor::coherence(3, 1);
  const StateVector psi = sample_pure({3}, 2);
  const double g = pure_gauge(psi, th);
  EXPECT_NEAR(convex_roof_upper(DensityMatrix(psi), th).value, g * g, 1e-10);
  std::mt19937_64 rng(9);
  const DensityMatrix rho({3}, oracle::random_density(3, 2, rng));
  MeasureOptions o;
  o.restarts = 4;
  const MeasureResult roof = convex_roof_upper(rho, th, o);
  EXPECT_EQ(roof.direction, BoundDirection::upper);
  EXPECT_GE(roof.value, nuclear_gauge(rho, th).value - 1e-6);
}

TEST(Lookup, NamesDispatchAndUnknownThrows) {
  const TheoryDescriptor th = TheoryDescriptor::magic(1);
  const DensityMatrix rho(t_state(1));
  for (const std::string& name : measure_names()) {
    if (name == "negativity") {
      EXPECT_THROW(evaluate_measure(name, rho, th), UnsupportedError);
      continue;
    }
    EXPECT_EQ(evaluate_measure(name, rho, th).name, name);
  }
  EXPECT_THROW(evaluate_measure("entropy", rho, th), UnsupportedError);
  EXPECT_THROW(evaluate_measure("base_gauge", rho, TheoryDescriptor::magic(2)), std::invalid_argument);
}

TEST(Dictionary, OverrideWithSameVerticesAgrees) {
  const TheoryDescriptor th = TheoryDescriptor::magic(1);
  MeasureOptions o;
  o.dictionary = std::make_shared<const PolytopeFreeSet>(PolytopeFreeSet::from_states(th, stabilizer_set(1).states));
  std::mt19937_64 rng(10);
  const DensityMatrix rho = qubit(rng);
  EXPECT_NEAR(generalized_robustness(rho, th, o).value, generalized_robustness(rho, th).value, 1e-9);
  // A two-vertex subset can only raise the robustness.
  MeasureOptions z;
  z.dictionary = std::make_shared<const PolytopeFreeSet>(
      PolytopeFreeSet::from_states(th, {stabilizer_set(1).states[0], stabilizer_set(1).states[1]}));
  EXPECT_GE(generalized_robustness(rho, th, z).value, generalized_robustness(rho, th).value - 1e-9);
}

}  // namespace
}  // namespace qgauge
