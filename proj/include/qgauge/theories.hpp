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

#pragma once

#include <optional>
#include <vector>

#include "qgauge/gauges.hpp"
#include "qgauge/linalg.hpp"
#include "qgauge/solvers/simplex.hpp"
#include "qgauge/stabilizer.hpp"
#include "qgauge/theory.hpp"

namespace qgauge {

/// Real coordinates of a Hermitian matrix in an orthonormal basis (length d^2):
/// diagonal entries, then sqrt(2) Re M_ij and sqrt(2) Im M_ij for i < j.
inline RVector hvec(const CMatrix& m) {
  const auto d = m.rows();
  RVector out(d * d);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) out(k++) = m(i, i).real();
  const double s = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      out(k++) = s * m(i, j).real();
      out(k++) = s * m(i, j).imag();
    }
  }
  return out;
}

inline CMatrix hmat(const RVector& v) {
  const auto d = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw std::invalid_argument("hmat: length is not a square");
  CMatrix m = CMatrix::Zero(d, d);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) m(i, i) = v(k++);
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      m(i, j) = cplx(s * v(k), s * v(k + 1));
      m(j, i) = std::conj(m(i, j));
      k += 2;
    }
  }
  return m;
}

/// Free set given as the convex hull of finitely many pure states.
struct PolytopeFreeSet {
  TheoryDescriptor theory;
  std::vector<StateVector> vertices;
  CMatrix dictionary;  // columns are the vertex vectors
  RMatrix coords;      // column i = hvec(|v_i><v_i|)
  bool exact = true;

  int size() const { return static_cast<int>(vertices.size()); }
  int dim() const { return static_cast<int>(dictionary.rows()); }
  CMatrix projector(int i) const { return vertices[i].projector(); }

  /// Vertex overlaps <v_i|P|v_i>.
  RVector overlaps(const CMatrix& p) const {
    return (dictionary.adjoint() * p * dictionary).diagonal().real();
  }

  /// Builds a free set from explicit vertex states (canonical phase, deduplicated).
  static PolytopeFreeSet from_states(const TheoryDescriptor& th, const std::vector<StateVector>& states) {
    PolytopeFreeSet p;
    p.theory = th;
    for (const auto& s : states) {
      if (s.dim() != th.dim()) throw std::invalid_argument("PolytopeFreeSet: vertex dimension mismatch");
      const CVector c = canonical_phase(s.amplitudes());
      bool dup = false;
      for (const auto& v : p.vertices) dup = dup || same_ray(v.amplitudes(), c);
      if (!dup) p.vertices.emplace_back(th.state_dims(), c);
    }
    if (p.vertices.empty()) throw std::invalid_argument("PolytopeFreeSet: no vertices");
    const int d = th.dim();
    p.dictionary.resize(d, p.size());
    p.coords.resize(static_cast<Eigen::Index>(d) * d, p.size());
    for (int i = 0; i < p.size(); ++i) {
      p.dictionary.col(i) = p.vertices[i].amplitudes();
      p.coords.col(i) = hvec(p.vertices[i].projector());
    }
    return p;
  }
};

/// Vertex dictionary for the polytope theories; continuum free sets are rejected.
inline PolytopeFreeSet build_polytope(const TheoryDescriptor& th) {
  if (th.kind == TheoryKind::magic) return PolytopeFreeSet::from_states(th, stabilizer_set(th.n).states);
  if (th.kind == TheoryKind::coherence && th.k == 1) {
    std::vector<StateVector> basis;
    for (int i = 0; i < th.d; ++i) basis.emplace_back(Dims{th.d}, CVector::Unit(th.d, i));
    return PolytopeFreeSet::from_states(th, basis);
  }
  throw UnsupportedError("continuum free set: " + th.to_string() + " has no finite vertex description");
}

/// Rank/overlap test for free pure states.
inline bool pure_free_test(const StateVector& psi, const TheoryDescriptor& th, double tol = 1e-9) {
  switch (th.kind) {
    case TheoryKind::coherence: return coherence_rank(psi.amplitudes(), tol) <= th.k;
    case TheoryKind::schmidt: {
      const RVector l = schmidt_coefficients(psi, th.da, th.db);
      return (l.array() > tol).count() <= th.k;
    }
    case TheoryKind::genuine:
      for (const auto& bp : bipartitions(static_cast<int>(th.parties.size()))) {
        const RVector l = bipartite_schmidt(psi.amplitudes(), th.parties, bp);
        if (l.size() < 2 || l(1) <= tol) return true;
      }
      return false;
    case TheoryKind::magic: return pure_polar(psi, th) >= 1.0 - tol;
  }
  return false;
}

/// Inside: weights with sum_i w_i sigma_i = rho. Outside: W with <W, sigma_i> >= 0, <W, rho> < 0.
struct MembershipCertificate {
  bool inside = false;
  std::optional<RVector> weights;
  std::optional<CMatrix> witness;
};

inline MembershipCertificate free_membership(const DensityMatrix& rho, const PolytopeFreeSet& poly) {
  if (rho.dim() != poly.dim()) throw std::invalid_argument("free_membership: dimension mismatch");
  LinearProgram lp(poly.size());
  lp.A = poly.coords;
  lp.b = hvec(rho.matrix());
  const LPSolution sol = simplex_solve(lp);
  MembershipCertificate out;
  if (sol.status == LPStatus::optimal) {
    out.inside = true;
    out.weights = sol.x.cwiseMax(0.0);
    return out;
  }
  if (sol.status != LPStatus::infeasible) throw std::runtime_error("free_membership: LP failed");
  CMatrix w = -hmat(sol.farkas_eq);
  const double scale = std::max(std::abs(min_eigenvalue(w)), std::abs(max_eigenvalue(w)));
  if (scale > 0.0) w /= scale;
  out.witness = w;
  return out;
}

inline MembershipCertificate free_membership(const DensityMatrix& rho, const TheoryDescriptor& th) {
  if (th.is_polytope()) return free_membership(rho, build_polytope(th));
  const auto pure = as_pure(rho);
  if (!pure) throw UnsupportedError("free_membership: mixed states are unsupported for " + th.to_string());
  MembershipCertificate out;
  if (pure_free_test(*pure, th)) {
    out.inside = true;
    out.weights = RVector::Ones(1);
  } else {
    // lambda I - |psi><psi| with lambda the largest free overlap.
    const double lambda = pure_polar(*pure, th);
    out.witness = CMatrix(lambda * CMatrix::Identity(rho.dim(), rho.dim()) - pure->projector());
  }
  return out;
}

}  // namespace qgauge
