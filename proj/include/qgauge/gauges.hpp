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

// Closed-form gauges on vectors and pure states.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qgauge/linalg.hpp"
#include "qgauge/solvers/admm.hpp"
#include "qgauge/stabilizer.hpp"
#include "qgauge/theory.hpp"

namespace qgauge {

/// Magnitudes sorted nonincreasing; ties keep the original order.
inline RVector sorted_magnitudes(const RVector& mags) {
  std::vector<int> idx(mags.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return mags(a) > mags(b); });
  RVector out(mags.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = mags(idx[i]);
  return out;
}

inline RVector sorted_magnitudes(const CVector& x) { return sorted_magnitudes(RVector(x.cwiseAbs())); }

namespace detail {

inline void check_k(Eigen::Index d, int k) {
  if (k < 1 || k > d) throw std::invalid_argument("k must satisfy 1 <= k <= d");
}

}  // namespace detail

/// Split index r of the k-support norm for sorted magnitudes s (first r that passes,
/// 0 when none does).
inline int ksupport_split(const RVector& s, int k) {
  detail::check_k(s.size(), k);
  for (int r = 0; r < k; ++r) {
    const int j = k - r - 1;  // first tail index
    const double avg = s.tail(s.size() - j).sum() / (r + 1);
    const bool left = j == 0 || s(j - 1) > avg;
    if (left && avg >= s(j)) return r;
  }
  return 0;
}

/// k-support norm of a vector of nonnegative magnitudes (any order).
inline double ksupport_norm(const RVector& mags, int k) {
  const RVector s = sorted_magnitudes(mags);
  const int r = ksupport_split(s, k);
  const int j = k - r - 1;
  const double tail = s.tail(s.size() - j).sum();
  return std::sqrt(s.head(j).squaredNorm() + tail * tail / (r + 1));
}

inline double ksupport_norm(const CVector& x, int k) { return ksupport_norm(RVector(x.cwiseAbs()), k); }

/// l2 norm of the k largest magnitudes.
inline double ksupport_dual(const RVector& mags, int k) {
  detail::check_k(mags.size(), k);
  return sorted_magnitudes(mags).head(k).norm();
}

inline double ksupport_dual(const CVector& x, int k) { return ksupport_dual(RVector(x.cwiseAbs()), k); }

inline int coherence_rank(const CVector& x, double tol = 1e-12) {
  if (tol < 0.0) throw std::invalid_argument("coherence_rank: negative tolerance");
  return static_cast<int>((x.cwiseAbs().array() > tol).count());
}

inline RVector schmidt_coefficients(const StateVector& psi, int da, int db) {
  return schmidt_decompose(psi, da, db).coefficients;
}

inline double schmidt_gauge(const StateVector& psi, int da, int db, int k) {
  return ksupport_norm(schmidt_coefficients(psi, da, db), k);
}

/// Sum over pairs j < k of l_j l_k.
inline double pure_negativity(const StateVector& psi, int da, int db) {
  const double g = schmidt_gauge(psi, da, db, 1);
  return std::max(0.0, (g * g - 1.0) / 2.0);
}

/// Party set A of a bipartition A|B; A always contains party 0.
struct Bipartition {
  std::vector<int> a;
  std::vector<int> b;
};

inline std::vector<Bipartition> bipartitions(int n) {
  if (n < 2 || n > 12) throw std::invalid_argument("bipartitions: need 2..12 parties");
  std::vector<Bipartition> out;
  for (int mask = 0; mask < (1 << (n - 1)); ++mask) {
    // Party 0 in A; the remaining parties follow the mask. Skip A = everything.
    if (mask == (1 << (n - 1)) - 1) continue;
    Bipartition bp;
    bp.a.push_back(0);
    for (int p = 1; p < n; ++p) ((mask >> (p - 1)) & 1 ? bp.a : bp.b).push_back(p);
    out.push_back(std::move(bp));
  }
  return out;
}

/// Schmidt coefficients of psi across A|B.
inline RVector bipartite_schmidt(const CVector& psi, const Dims& dims, const Bipartition& bp) {
  Dims da, db;
  for (int p : bp.a) da.push_back(dims[p]);
  for (int p : bp.b) db.push_back(dims[p]);
  const int pa = product(da), pb = product(db);
  CVector reordered(psi.size());
  std::vector<int> digits(dims.size()), ad(bp.a.size()), bd(bp.b.size());
  for (int i = 0; i < psi.size(); ++i) {
    digits = detail::digits(i, dims);
    for (std::size_t q = 0; q < bp.a.size(); ++q) ad[q] = digits[bp.a[q]];
    for (std::size_t q = 0; q < bp.b.size(); ++q) bd[q] = digits[bp.b[q]];
    reordered(detail::compose(ad, da) * pb + detail::compose(bd, db)) = psi(i);
  }
  return schmidt_decompose(reordered, pa, pb).coefficients;
}

/// Minimum over bipartitions of the sum of Schmidt coefficients.
inline double genuine_gauge(const StateVector& psi, const Dims& dims) {
  if (product(dims) != psi.dim()) throw std::invalid_argument("genuine_gauge: dims mismatch");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& bp : bipartitions(static_cast<int>(dims.size()))) {
    best = std::min(best, bipartite_schmidt(psi.amplitudes(), dims, bp).sum());
  }
  return best;
}

inline double elementwise_l1(const CMatrix& m) { return m.cwiseAbs().sum(); }

inline double elementwise_max(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline double max_diag_clipped(const CMatrix& m) {
  return std::max(0.0, m.diagonal().real().maxCoeff());
}

struct MagicGaugeOptions {
  double tol = 1e-10;
  int max_iter = 200000;
};

/// Complex l1 minimum over stabilizer decompositions of psi.
inline L1Result magic_decomposition(const CVector& psi, int n, MagicGaugeOptions opt = {},
                                    const CMatrix* dictionary = nullptr) {
  const CMatrix& t = dictionary ? *dictionary : stabilizer_set(n).dictionary;
  if (t.rows() != psi.size()) throw std::invalid_argument("magic_decomposition: dimension mismatch");
  AdmmOptions ao;
  ao.tol = opt.tol;
  ao.max_iter = opt.max_iter;
  return admm_l1_affine(DenseMap(t), psi, ao);
}

/// Largest squared overlap of psi with the columns of t.
inline double max_overlap_sq(const CVector& psi, const CMatrix& t) {
  return (t.adjoint() * psi).cwiseAbs2().maxCoeff();
}

/// Pure-state gauge of the theory's free vector set.
inline double pure_gauge(const StateVector& psi, const TheoryDescriptor& th, const CMatrix* dictionary = nullptr) {
  if (psi.dim() != th.dim()) throw std::invalid_argument("pure_gauge: state dimension does not match theory");
  switch (th.kind) {
    case TheoryKind::coherence: return ksupport_norm(psi.amplitudes(), th.k);
    case TheoryKind::schmidt: return schmidt_gauge(psi, th.da, th.db, th.k);
    case TheoryKind::genuine: return genuine_gauge(psi, th.parties);
    case TheoryKind::magic: return magic_decomposition(psi.amplitudes(), th.n, {}, dictionary).value;
  }
  throw UnsupportedError("pure_gauge: unknown theory");
}

/// Squared polar of the pure vector gauge: the largest overlap with a free pure state.
inline double pure_polar(const StateVector& psi, const TheoryDescriptor& th, const CMatrix* dictionary = nullptr) {
  if (psi.dim() != th.dim()) throw std::invalid_argument("pure_polar: state dimension does not match theory");
  switch (th.kind) {
    case TheoryKind::coherence: {
      const double v = ksupport_dual(psi.amplitudes(), th.k);
      return v * v;
    }
    case TheoryKind::schmidt: {
      const double v = ksupport_dual(schmidt_coefficients(psi, th.da, th.db), th.k);
      return v * v;
    }
    case TheoryKind::genuine: {
      double best = 0.0;
      for (const auto& bp : bipartitions(static_cast<int>(th.parties.size()))) {
        const double l = bipartite_schmidt(psi.amplitudes(), th.parties, bp)(0);
        best = std::max(best, l * l);
      }
      return best;
    }
    case TheoryKind::magic:
      return max_overlap_sq(psi.amplitudes(), dictionary ? *dictionary : stabilizer_set(th.n).dictionary);
  }
  throw UnsupportedError("pure_polar: unknown theory");
}

/// One minus the largest squared overlap with a free pure state.
inline double geometric_pure(const StateVector& psi, const TheoryDescriptor& th, const CMatrix* dictionary = nullptr) {
  return std::clamp(1.0 - pure_polar(psi, th, dictionary), 0.0, 1.0);
}

}  // namespace qgauge
