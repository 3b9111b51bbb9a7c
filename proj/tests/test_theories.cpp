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
#include "qgauge/theories.hpp"

namespace qgauge {
namespace {

TEST(Stabilizer, CountsAndClosure) {
  const std::size_t expected[] = {0, 6, 60, 1080};
  for (int n = 1; n <= 3; ++n) {
    const StabilizerSet& s = stabilizer_set(n);
    EXPECT_EQ(s.states.size(), expected[n]);
    EXPECT_LT(oracle::closure_defect(s.dictionary), 1e-10);
  }
  EXPECT_THROW(stabilizer_set(0), std::invalid_argument);
  EXPECT_THROW(stabilizer_enumerate(4), std::invalid_argument);
}

TEST(Stabilizer, DistinctRaysAndKnownOverlaps) {
  const CMatrix& t = stabilizer_set(1).dictionary;
  const Eigen::MatrixXd ov = (t.adjoint() * t).cwiseAbs2();
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      // Single-qubit stabilizer states: identical, orthogonal, or overlap 1/2.
      const double v = ov(i, j);
      EXPECT_TRUE(std::abs(v - 1.0) < 1e-12 ? i == j : (std::abs(v) < 1e-12 || std::abs(v - 0.5) < 1e-12)) << v;
    }
  }
  // The first state is |0...0> and every vector carries canonical phase.
  EXPECT_NEAR(std::abs(stabilizer_set(2).dictionary(0, 0) - 1.0), 0.0, 1e-15);
  for (const auto& s : stabilizer_set(2).states) EXPECT_LT(std::abs(canonical_phase(s.amplitudes())(0) - s.amplitudes()(0)), 1e-15);
}

TEST(Stabilizer, MagicStateOverlap) {
  // Largest stabilizer fidelity of |T>: (1 + 1/sqrt 3) / 2.
  const StateVector t = t_state(1);
  EXPECT_NEAR(max_overlap_sq(t.amplitudes(), stabilizer_set(1).dictionary), (1.0 + 1.0 / std::sqrt(3.0)) / 2.0, 1e-12);
  EXPECT_NEAR(t_state(2).amplitudes().norm(), 1.0, 1e-14);
}

TEST(Theory, ParseRoundTrip) {
  for (const char* s : {"coherence:d=4,k=2", "schmidt:dA=3,dB=2,k=1", "genuine:dims=2x3x2", "magic:n=2"}) {
    EXPECT_EQ(parse_theory(s).to_string(), s);
  }
  EXPECT_EQ(parse_theory("coherence:k=1,d=3"), TheoryDescriptor::coherence(3, 1));
}

TEST(Theory, ParseErrors) {
  for (const char* s : {"coherence", "coherence:d=3", "coherence:d=3,k=4", "coherence:d=3,k=1,x=2", "coherence:d=3,d=3,k=1",
                        "magic:n=4", "magic:n=one", "genuine:dims=2", "schmidt:dA=2,dB=2,k=3", "quantum:n=1"}) {
    EXPECT_THROW(parse_theory(s), ParseError) << s;
  }
}

TEST(Theory, PolytopeClassification) {
  EXPECT_TRUE(TheoryDescriptor::magic(1).is_polytope());
  EXPECT_TRUE(TheoryDescriptor::coherence(3, 1).is_polytope());
  EXPECT_FALSE(TheoryDescriptor::coherence(3, 2).is_polytope());
  EXPECT_FALSE(TheoryDescriptor::schmidt(2, 2, 1).is_polytope());
  EXPECT_THROW(build_polytope(TheoryDescriptor::schmidt(2, 2, 1)), UnsupportedError);
  EXPECT_EQ(build_polytope(TheoryDescriptor::coherence(4, 1)).size(), 4);
}

TEST(Polytope, FromStatesDeduplicatesRays) {
  const TheoryDescriptor th = TheoryDescriptor::coherence(2, 1);
  CVector a(2);
  a << 1.0, 0.0;
  const StateVector s0({2}, a), s1({2}, CVector(a * cplx(0.0, 1.0)));
  EXPECT_EQ(PolytopeFreeSet::from_states(th, {s0, s1}).size(), 1);
  EXPECT_THROW(PolytopeFreeSet::from_states(th, {}), std::invalid_argument);
}

TEST(Membership, InsideWeightsReconstruct) {
  const PolytopeFreeSet poly = build_polytope(TheoryDescriptor::magic(1));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    RVector w(6);
    for (int i = 0; i < 6; ++i) w(i) = u(rng);
    w /= w.sum();
    CMatrix rho = CMatrix::Zero(2, 2);
    for (int i = 0; i < 6; ++i) rho += w(i) * poly.projector(i);
    const MembershipCertificate mc = free_membership(DensityMatrix({2}, rho), poly);
    ASSERT_TRUE(mc.inside);
    CMatrix back = CMatrix::Zero(2, 2);
    for (int i = 0; i < 6; ++i) back += (*mc.weights)(i) * poly.projector(i);
    EXPECT_LT((back - rho).norm(), 1e-9);
  }
}

TEST(Membership, OutsideWitnessSeparates) {
  const PolytopeFreeSet poly = build_polytope(TheoryDescriptor::magic(1));
  const DensityMatrix rho(t_state(1));
  const MembershipCertificate mc = free_membership(rho, poly);
  ASSERT_FALSE(mc.inside);
  ASSERT_TRUE(mc.witness.has_value());
  EXPECT_GE(poly.overlaps(*mc.witness).minCoeff(), -1e-12);
  EXPECT_LT(hs_inner(*mc.witness, rho.matrix()), -1e-6);
}

TEST(Membership, ContinuumPureStates) {
  const TheoryDescriptor th = TheoryDescriptor::schmidt(2, 2, 1);
  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const MembershipCertificate mc = free_membership(DensityMatrix(StateVector({2, 2}, bell)), th);
  ASSERT_FALSE(mc.inside);
  // W = 1/2 I - |bell><bell| is nonnegative on product states.
  EXPECT_NEAR(hs_inner(*mc.witness, CMatrix(bell * bell.adjoint())), -0.5, 1e-12);
  const StateVector prod({2, 2}, kron(sample_pure({2}, 1).amplitudes(), sample_pure({2}, 2).amplitudes()), 1e-12);
  EXPECT_TRUE(free_membership(DensityMatrix(prod), th).inside);
  EXPECT_THROW(free_membership(DensityMatrix::maximally_mixed({2, 2}), th), UnsupportedError);
}

TEST(PureFree, RecognizesFreeStates) {
  CVector v = CVector::Zero(4);
  v(0) = v(2) = 1.0 / std::sqrt(2.0);
  EXPECT_TRUE(pure_free_test(StateVector({4}, v), TheoryDescriptor::coherence(4, 2)));
  EXPECT_FALSE(pure_free_test(StateVector({4}, v), TheoryDescriptor::coherence(4, 1)));
  EXPECT_TRUE(pure_free_test(stabilizer_set(2).states[17], TheoryDescriptor::magic(2)));
  EXPECT_FALSE(pure_free_test(t_state(2), TheoryDescriptor::magic(2)));
}

}  // namespace
}  // namespace qgauge
