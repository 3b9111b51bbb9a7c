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

// Resource quantifiers on density matrices.
//
// Every measure returns a MeasureResult holding the value together with the
// bounds that back it. Polytope theories (magic, coherence with k = 1) get the
// full LP / cutting-plane treatment; continuum free sets are handled on pure
// states through the vector gauges and rejected otherwise.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qgauge/gauges.hpp"
#include "qgauge/linalg.hpp"
#include "qgauge/solvers/admm.hpp"
#include "qgauge/solvers/cutting_plane.hpp"
#include "qgauge/solvers/ensemble.hpp"
#include "qgauge/solvers/frank_wolfe.hpp"
#include "qgauge/solvers/simplex.hpp"
#include "qgauge/theories.hpp"
#include "qgauge/theory.hpp"

namespace qgauge {

enum class MeasureStatus { ok, infinite, uncertified, failed };

inline const char* to_string(MeasureStatus s) {
  switch (s) {
    case MeasureStatus::ok: return "ok";
    case MeasureStatus::infinite: return "infinite";
    case MeasureStatus::uncertified: return "uncertified";
    case MeasureStatus::failed: return "failed";
  }
  return "?";
}

/// Direction in which a heuristic value may be off.
enum class BoundDirection { exact, upper, lower };

inline const char* to_string(BoundDirection b) {
  switch (b) {
    case BoundDirection::exact: return "exact";
    case BoundDirection::upper: return "upper_bound";
    case BoundDirection::lower: return "lower_bound";
  }
  return "?";
}

struct SolverStats {
  std::string method;
  std::string solver_status;
  int iterations = 0;
  int rounds = 0;
  int cuts = 0;
};

struct MeasureResult {
  std::string name;
  double value = std::numeric_limits<double>::quiet_NaN();
  MeasureStatus status = MeasureStatus::failed;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  std::optional<CMatrix> witness;
  std::string witness_kind;  // "generalized", "standard" or empty
  BoundDirection direction = BoundDirection::exact;
  SolverStats stats;

  double gap() const { return upper - lower; }
  bool finite() const { return status != MeasureStatus::infinite && std::isfinite(value); }
};

enum class Route { automatic, closed_form, solver };

struct MeasureOptions {
  double tol = 1e-8;          // ADMM relative gap
  int max_iter = 200000;      // ADMM / Frank-Wolfe iteration cap
  int max_rounds = 500;       // cutting-plane rounds
  double eps_psd = -1.0;      // < 0: min(1e-8, 1e-3 certify_tol) (1 + ||rho||_F)
  int restarts = 32;          // ensemble restarts
  std::uint64_t seed = 1;
  Route route = Route::automatic;
  double certify_tol = 1e-5;  // |upper - lower| <= certify_tol (1 + value)
  std::shared_ptr<const PolytopeFreeSet> dictionary;  // vertex override
};

namespace detail {

inline double snap(double v) { return std::abs(v) < 1e-10 ? 0.0 : v; }

inline void certify(MeasureResult& r, const MeasureOptions& opt) {
  if (r.status == MeasureStatus::infinite) return;
  const bool ok = std::isfinite(r.lower) && std::isfinite(r.upper) &&
                  r.upper - r.lower <= opt.certify_tol * (1.0 + std::abs(r.value));
  r.status = ok ? MeasureStatus::ok : MeasureStatus::uncertified;
}

inline MeasureResult infinite(std::string name, std::string method) {
  MeasureResult r;
  r.name = std::move(name);
  r.value = std::numeric_limits<double>::infinity();
  r.lower = r.value;
  r.upper = r.value;
  r.status = MeasureStatus::infinite;
  r.stats.method = std::move(method);
  return r;
}

inline double eps_for(const DensityMatrix& rho, const MeasureOptions& opt) {
  // A tighter certificate needs a tighter PSD tolerance; the default sits at 1e-8.
  return opt.eps_psd > 0.0 ? opt.eps_psd : std::min(1e-8, 1e-3 * opt.certify_tol) * (1.0 + rho.matrix().norm());
}

inline CuttingPlaneOptions cp_options(const DensityMatrix& rho, const MeasureOptions& opt) {
  CuttingPlaneOptions o;
  o.eps_psd = eps_for(rho, opt);
  o.max_rounds = opt.max_rounds;
  o.gap_tol = 0.1 * opt.certify_tol;
  o.lp.tol = std::min(o.lp.tol, 0.1 * o.eps_psd);
  return o;
}

inline void check_dims(const DensityMatrix& rho, const TheoryDescriptor& th, const char* who) {
  if (rho.dim() != th.dim()) {
    throw std::invalid_argument(std::string(who) + ": state dimension " + std::to_string(rho.dim()) +
                                " does not match theory " + th.to_string());
  }
}

inline std::shared_ptr<const PolytopeFreeSet> cached_polytope(const TheoryDescriptor& th) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const PolytopeFreeSet>> cache;
  const std::string key = th.to_string();
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto p = std::make_shared<const PolytopeFreeSet>(build_polytope(th));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, p).first->second;
}

}  // namespace detail

/// Vertex set in force: the override when present, otherwise the theory's own.
inline std::shared_ptr<const PolytopeFreeSet> polytope_for(const TheoryDescriptor& th, const MeasureOptions& opt) {
  if (opt.dictionary) {
    if (opt.dictionary->dim() != th.dim()) throw std::invalid_argument("dictionary dimension does not match theory");
    return opt.dictionary;
  }
  return detail::cached_polytope(th);
}

// ---------------------------------------------------------------------------
// Polar gauge on PSD matrices

struct PolarResult {
  double value = 0.0;
  double lambda_star = 0.0;  // lambda* I - P is nonnegative on every free state
  bool heuristic = false;    // true: value is a lower bound from local search
  int argmax = -1;           // maximizing vertex for polytopes
};

namespace detail {

// Largest <y|P|y> over unit y with Schmidt rank <= k (local search, lower bound).
inline double schmidt_polar_search(const CMatrix& p, int da, int db, int k, std::uint64_t seed, int restarts = 16) {
  auto truncate = [&](const CVector& v) {
    SchmidtData s = schmidt_decompose(v, da, db);
    CVector out = CVector::Zero(v.size());
    for (int i = 0; i < k && i < s.coefficients.size(); ++i) {
      out += s.coefficients(i) * kron(CVector(s.left.col(i)), CVector(s.right.col(i)));
    }
    const double n = out.norm();
    return n > 0 ? CVector(out / n) : out;
  };
  Eigen::SelfAdjointEigenSolver<CMatrix> es(p);
  const auto d = p.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    CVector y(d);
    if (r < d) {
      y = es.eigenvectors().col(d - 1 - r);
    } else {
      for (Eigen::Index i = 0; i < d; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        y(i) = cplx(re, im);
      }
    }
    y = truncate(y);
    if (y.norm() == 0.0) continue;
    double val = y.dot(p * y).real();
    for (int it = 0; it < 500; ++it) {
      CVector next = truncate(p * y + 1e-12 * y);
      if (next.norm() == 0.0) break;
      const double nv = next.dot(p * next).real();
      y = next;
      if (nv <= val + 1e-15) {
        val = std::max(val, nv);
        break;
      }
      val = nv;
    }
    best = std::max(best, val);
  }
  return best;
}

}  // namespace detail

inline PolarResult polar_gauge_psd(const CMatrix& p_in, const TheoryDescriptor& th, const MeasureOptions& opt = {}) {
  const Hermitian herm(p_in);
  const CMatrix& p = herm.matrix();
  if (p.rows() != th.dim()) throw std::invalid_argument("polar_gauge_psd: dimension mismatch");
  if (min_eigenvalue(p) < -1e-9 * (1.0 + max_abs(p))) throw std::invalid_argument("polar_gauge_psd: matrix is not PSD");
  PolarResult out;
  if (th.is_polytope() || opt.dictionary) {
    const auto poly = polytope_for(th, opt);
    const RVector ov = poly->overlaps(p);
    Eigen::Index arg = 0;
    const double m = ov.maxCoeff(&arg);
    out.value = std::max(0.0, m);
    out.argmax = static_cast<int>(arg);
    out.lambda_star = out.value;
    return out;
  }
  if (th.kind == TheoryKind::coherence) {
    // max over k-subsets I of lambda_max(P_II)
    const int d = th.d, k = th.k;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    double best = 0.0;
    while (true) {
      CMatrix sub(k, k);
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) sub(a, b) = p(idx[a], idx[b]);
      }
      best = std::max(best, max_eigenvalue(sub));
      int pos = k - 1;
      while (pos >= 0 && idx[pos] == d - k + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
    }
    out.value = std::max(0.0, best);
    out.lambda_star = out.value;
    return out;
  }
  // Rank-one P: exact through the pure-state polar.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(p);
  const auto d = p.rows();
  const double top = es.eigenvalues()(d - 1);
  const double second = d > 1 ? es.eigenvalues()(d - 2) : 0.0;
  if (top <= 0.0) return out;
  if (second <= 1e-12 * top) {
    const StateVector v = StateVector::normalized(th.state_dims(), es.eigenvectors().col(d - 1));
    out.value = top * pure_polar(v, th);
    out.lambda_star = out.value;
    return out;
  }
  out.heuristic = true;
  if (th.kind == TheoryKind::schmidt) {
    out.value = detail::schmidt_polar_search(p, th.da, th.db, th.k, opt.seed);
  } else {
    // Genuine: biseparable states are products across some bipartition.
    double best = 0.0;
    const int n = static_cast<int>(th.parties.size());
    for (const auto& bp : bipartitions(n)) {
      Dims order;
      for (int a : bp.a) order.push_back(a);
      for (int b : bp.b) order.push_back(b);
      Dims da, db;
      for (int a : bp.a) da.push_back(th.parties[a]);
      for (int b : bp.b) db.push_back(th.parties[b]);
      // Permute P into (A, B) ordering.
      const int dim = static_cast<int>(d);
      std::vector<int> perm(dim);
      std::vector<int> digits(n), od(n);
      Dims odims;
      for (int q : order) odims.push_back(th.parties[q]);
      for (int i = 0; i < dim; ++i) {
        digits = qgauge::detail::digits(i, th.parties);
        for (int q = 0; q < n; ++q) od[q] = digits[order[q]];
        perm[i] = qgauge::detail::compose(od, odims);
      }
      CMatrix pp(dim, dim);
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) pp(perm[i], perm[j]) = p(i, j);
      }
      best = std::max(best, detail::schmidt_polar_search(pp, product(da), product(db), 1, opt.seed));
    }
    out.value = best;
  }
  out.lambda_star = out.value;
  return out;
}

// ---------------------------------------------------------------------------
// Witness validation

enum class WitnessKind { generalized, standard };

/// Residual fields are >= 0 (within tolerance) for a feasible witness.
struct WitnessCheck {
  double free_residual = 0.0;      // min over free states of <W, sigma>
  double identity_residual = 0.0;  // generalized: lambda_min(I - W)
  double upper_residual = 0.0;     // standard: 1 - max <sigma, W>
  double bound = 0.0;              // -<rho, W>: certified lower bound on the robustness
  bool heuristic = false;          // free_residual from a local search (continuum sets)

  bool feasible(double tol = 1e-7) const {
    return free_residual >= -tol && identity_residual >= -tol && upper_residual >= -tol;
  }
};

inline WitnessCheck witness_validate(const CMatrix& w_in, const DensityMatrix& rho, const TheoryDescriptor& th,
                                     WitnessKind kind, const MeasureOptions& opt = {}) {
  const Hermitian herm(w_in, 1e-8);
  const CMatrix& w = herm.matrix();
  if (w.rows() != rho.dim()) throw std::invalid_argument("witness_validate: dimension mismatch");
  WitnessCheck out;
  out.bound = -hs_inner(rho.matrix(), w);
  const auto d = w.rows();
  const CMatrix id = CMatrix::Identity(d, d);
  if (th.is_polytope() || opt.dictionary) {
    const RVector ov = polytope_for(th, opt)->overlaps(w);
    out.free_residual = ov.minCoeff();
    if (kind == WitnessKind::standard) out.upper_residual = 1.0 - ov.maxCoeff();
  } else {
    // min over free sigma of <W, sigma> = -(max over free of <-W, sigma>); shift to PSD.
    const double shift = std::max(0.0, -min_eigenvalue(-w));
    const CMatrix pos = -w + shift * id;
    const PolarResult pr = polar_gauge_psd(pos, th, opt);
    out.free_residual = shift - pr.value;
    out.heuristic = pr.heuristic;
    if (kind == WitnessKind::standard) {
      const double s2 = std::max(0.0, -min_eigenvalue(w));
      out.upper_residual = 1.0 - (polar_gauge_psd(CMatrix(w + s2 * id), th, opt).value - s2);
    }
  }
  if (kind == WitnessKind::generalized) out.identity_residual = min_eigenvalue(id - w);
  return out;
}

// ---------------------------------------------------------------------------
// LP-based measures

namespace detail {

inline bool in_vertex_span(const PolytopeFreeSet& poly, const RVector& b) {
  const RMatrix& a = poly.coords;
  const RVector x = a.colPivHouseholderQr().solve(b);
  return (a * x - b).norm() <= 1e-9 * (1.0 + b.norm());
}

}  // namespace detail

/// min sum(a + b) s.t. sum (a_i - b_i) sigma_i = rho; also the standard robustness (value - 1) / 2.
inline MeasureResult base_gauge(const DensityMatrix& rho, const TheoryDescriptor& th, const MeasureOptions& opt = {}) {
  detail::check_dims(rho, th, "base_gauge");
  if (!th.is_polytope() && !opt.dictionary) {
    throw UnsupportedError("base_gauge: continuum free set " + th.to_string() + " is unsupported");
  }
  const auto poly = polytope_for(th, opt);
  const RVector b = hvec(rho.matrix());
  if (!detail::in_vertex_span(*poly, b)) return detail::infinite("base_gauge", "span_test");
  const int n = poly->size();
  LinearProgram lp(2 * n);
  lp.A.resize(b.size(), 2 * n);
  lp.A << poly->coords, -poly->coords;
  lp.b = b;
  lp.c.setOnes();
  const LPSolution sol = simplex_solve(lp);
  MeasureResult r;
  r.name = "base_gauge";
  r.stats.method = "simplex";
  r.stats.solver_status = to_string(sol.status);
  r.stats.iterations = sol.iterations;
  if (sol.status == LPStatus::infeasible) return detail::infinite("base_gauge", "simplex");
  if (sol.status != LPStatus::optimal) return r;
  r.value = std::max(1.0, sol.objective);
  r.upper = sol.objective;
  // Y from the equality duals: |<Y, sigma_i>| <= 1 and <rho, Y> = value.
  const CMatrix y = hmat(sol.eq_duals);
  r.lower = hs_inner(rho.matrix(), y);
  r.witness = CMatrix(0.5 * (CMatrix::Identity(rho.dim(), rho.dim()) - y));
  r.witness_kind = "standard";
  detail::certify(r, opt);
  return r;
}

inline MeasureResult standard_robustness(const DensityMatrix& rho, const TheoryDescriptor& th,
                                         const MeasureOptions& opt = {}) {
  detail::check_dims(rho, th, "standard_robustness");
  if (!th.is_polytope() && !opt.dictionary) {
    throw UnsupportedError("standard_robustness: continuum free set " + th.to_string() + " is unsupported");
  }
  MeasureResult r = base_gauge(rho, th, opt);
  r.name = "standard_robustness";
  if (r.status == MeasureStatus::infinite || r.status == MeasureStatus::failed) return r;
  r.value = detail::snap(std::max(0.0, (r.value - 1.0) / 2.0));
  r.lower = (r.lower - 1.0) / 2.0;
  r.upper = (r.upper - 1.0) / 2.0;
  return r;
}

/// min s s.t. rho + s I/d = sum x_i sigma_i, x >= 0, s >= 0.
inline MeasureResult random_robustness(const DensityMatrix& rho, const TheoryDescriptor& th,
                                       const MeasureOptions& opt = {}) {
  detail::check_dims(rho, th, "random_robustness");
  if (!th.is_polytope() && !opt.dictionary) {
    throw UnsupportedError("random_robustness: continuum free set " + th.to_string() + " is unsupported");
  }
  const auto poly = polytope_for(th, opt);
  const int n = poly->size();
  const int d = rho.dim();
  LinearProgram lp(n + 1);
  lp.A.resize(static_cast<Eigen::Index>(d) * d, n + 1);
  lp.A.leftCols(n) = poly->coords;
  lp.A.col(n) = -hvec(CMatrix(CMatrix::Identity(d, d) / static_cast<double>(d)));
  lp.b = hvec(rho.matrix());
  lp.c(n) = 1.0;
  const LPSolution sol = simplex_solve(lp);
  if (sol.status == LPStatus::infeasible) return detail::infinite("random_robustness", "simplex");
  MeasureResult r;
  r.name = "random_robustness";
  r.stats.method = "simplex";
  r.stats.solver_status = to_string(sol.status);
  r.stats.iterations = sol.iterations;
  if (sol.status != LPStatus::optimal) return r;
  r.value = detail::snap(std::max(0.0, sol.objective));
  r.upper = sol.objective;
  r.lower = sol.eq_duals.dot(lp.b);
  detail::certify(r, opt);
  return r;
}

// ---------------------------------------------------------------------------
// Generalized robustness

namespace detail {

// Projection onto the nonincreasing cone (pool adjacent violators).
inline RVector isotonic_nonincreasing(const RVector& b) {
  std::vector<double> sum, cnt;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    sum.push_back(b(i));
    cnt.push_back(1.0);
    while (sum.size() > 1 && sum[sum.size() - 2] / cnt[cnt.size() - 2] < sum.back() / cnt.back()) {
      sum[sum.size() - 2] += sum.back();
      cnt[cnt.size() - 2] += cnt.back();
      sum.pop_back();
      cnt.pop_back();
    }
  }
  RVector out(b.size());
  Eigen::Index k = 0;
  for (std::size_t g = 0; g < sum.size(); ++g) {
    for (int j = 0; j < static_cast<int>(cnt[g]); ++j) out(k++) = sum[g] / cnt[g];
  }
  return out;
}

struct DualVector {
  double gauge = 0.0;  // max Re<y, psi> over the dual unit ball
  CVector y;           // maximizer, in Hilbert space
};

// max sum_i a_i s_i over s sorted like a with top-k l2 norm <= 1.
inline std::pair<double, RVector> ksupport_dual_route(const RVector& sorted, int k) {
  const auto d = sorted.size();
  RVector b(k);
  for (int i = 0; i < k - 1; ++i) b(i) = sorted(i);
  b(k - 1) = sorted.tail(d - k + 1).sum();
  const RVector proj = isotonic_nonincreasing(b);
  const double g = proj.norm();
  RVector s(d);
  for (Eigen::Index i = 0; i < d; ++i) s(i) = g > 0 ? proj(std::min<Eigen::Index>(i, k - 1)) / g : 0.0;
  return {g, s};
}

inline DualVector coherence_dual(const CVector& psi, int k) {
  const RVector mags = psi.cwiseAbs();
  std::vector<int> idx(mags.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return mags(a) > mags(b); });
  RVector sorted(mags.size());
  for (std::size_t i = 0; i < idx.size(); ++i) sorted(i) = mags(idx[i]);
  auto [g, s] = ksupport_dual_route(sorted, k);
  DualVector out{g, CVector::Zero(psi.size())};
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const cplx z = psi(idx[i]);
    const cplx phase = std::abs(z) > 0 ? z / std::abs(z) : cplx(1.0);
    out.y(idx[i]) = s(i) * phase;
  }
  return out;
}

inline DualVector schmidt_dual(const CVector& psi, int da, int db, int k) {
  const SchmidtData sd = schmidt_decompose(psi, da, db);
  auto [g, s] = ksupport_dual_route(sd.coefficients, k);
  DualVector out{g, CVector::Zero(psi.size())};
  for (Eigen::Index i = 0; i < sd.coefficients.size(); ++i) {
    out.y += s(i) * kron(CVector(sd.left.col(i)), CVector(sd.right.col(i)));
  }
  return out;
}

inline MeasureResult rg_cutting_plane(const DensityMatrix& rho, const TheoryDescriptor& th, const MeasureOptions& opt) {
  const auto poly = polytope_for(th, opt);
  const int n = poly->size();
  const int d = rho.dim();
  LinearProgram lp(n);
  lp.c.setOnes();
  PsdBlock blk;
  blk.m0 = -rho.matrix();
  for (int i = 0; i < n; ++i) blk.mi.push_back(poly->projector(i));
  // Restoration along the uniform vertex mixture Q: x + t/n with M(x) + t Q >= 0.
  CMatrix q = CMatrix::Zero(d, d);
  for (int i = 0; i < n; ++i) q += blk.mi[i] / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<CMatrix> qe(q);
  const bool q_pd = qe.eigenvalues()(0) > 1e-12;
  CMatrix q_isqrt;
  if (q_pd) {
    q_isqrt = qe.eigenvectors() * qe.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * qe.eigenvectors().adjoint();
  }
  Restore restore = [&](const RVector& x) -> std::optional<RVector> {
    if (!q_pd) return std::nullopt;
    const CMatrix m = q_isqrt * blk.at(x) * q_isqrt;
    const double t = std::max(0.0, -min_eigenvalue(m)) * (1.0 + 1e-9) + 1e-15;
    return RVector((x.array() + t / n).matrix());
  };
  const CuttingPlaneResult cp = cutting_plane_psd(lp, {blk}, cp_options(rho, opt), restore);
  MeasureResult r;
  r.name = "generalized_robustness";
  r.stats.method = "cutting_plane";
  r.stats.solver_status = to_string(cp.status);
  r.stats.rounds = cp.rounds;
  r.stats.cuts = static_cast<int>(cp.record.cuts.size());
  if (cp.lp_status != LPStatus::optimal) return r;
  // W' = sum_c mu_c w_c w_c^H satisfies <W', sigma_i> <= 1; witness W = I - W'.
  CMatrix wp = CMatrix::Zero(d, d);
  for (std::size_t c = 0; c < cp.record.cuts.size(); ++c) {
    const CVector& w = cp.record.cuts[c].w;
    wp += cp.cut_duals[c] * (w * w.adjoint());
  }
  r.value = snap(std::max(0.0, cp.lower - 1.0));
  r.lower = hs_inner(rho.matrix(), wp) - 1.0;
  r.upper = cp.upper - 1.0;
  r.witness = CMatrix(CMatrix::Identity(d, d) - wp);
  r.witness_kind = "generalized";
  certify(r, opt);
  return r;
}

}  // namespace detail

/// Pure states: closed form through the vector gauge. Mixed states: cutting plane
/// on  min sum x  s.t.  sum x_i sigma_i >= rho  (polytope theories only).
inline MeasureResult generalized_robustness(const DensityMatrix& rho, const TheoryDescriptor& th,
                                            const MeasureOptions& opt = {}) {
  detail::check_dims(rho, th, "generalized_robustness");
  const bool polytope = th.is_polytope() || static_cast<bool>(opt.dictionary);
  const auto pure = as_pure(rho);
  const int d = rho.dim();
  const CMatrix id = CMatrix::Identity(d, d);

  if (!pure) {
    if (opt.route == Route::closed_form) throw UnsupportedError("generalized_robustness: closed form needs a pure state");
    if (!polytope) {
      throw UnsupportedError("generalized_robustness: mixed states are unsupported for " + th.to_string());
    }
    return detail::rg_cutting_plane(rho, th, opt);
  }
  if (opt.route == Route::solver) {
    if (polytope) return detail::rg_cutting_plane(rho, th, opt);
    MeasureResult r;
    r.name = "generalized_robustness";
    r.stats.method = "dual_isotonic";
    const CVector& psi = pure->amplitudes();
    detail::DualVector dv;
    if (th.kind == TheoryKind::coherence) {
      dv = detail::coherence_dual(psi, th.k);
    } else if (th.kind == TheoryKind::schmidt) {
      dv = detail::schmidt_dual(psi, th.da, th.db, th.k);
    } else {
      // Minimum over bipartitions of the k = 1 route.
      double best = std::numeric_limits<double>::infinity();
      for (const auto& bp : bipartitions(static_cast<int>(th.parties.size()))) {
        best = std::min(best, detail::ksupport_dual_route(bipartite_schmidt(psi, th.parties, bp), 1).first);
      }
      r.value = detail::snap(std::max(0.0, best * best - 1.0));
      r.lower = r.upper = best * best - 1.0;
      r.status = MeasureStatus::ok;
      return r;
    }
    const double ov = std::norm(dv.y.dot(psi));
    r.value = detail::snap(std::max(0.0, dv.gauge * dv.gauge - 1.0));
    r.lower = ov - 1.0;
    r.upper = dv.gauge * dv.gauge - 1.0;
    r.witness = CMatrix(id - dv.y * dv.y.adjoint());
    r.witness_kind = "generalized";
    detail::certify(r, opt);
    return r;
  }
  // Closed form: R_g = Gamma_V(psi)^2 - 1.
  MeasureResult r;
  r.name = "generalized_robustness";
  r.stats.method = "closed_form";
  const CVector& psi = pure->amplitudes();
  if (polytope && th.kind == TheoryKind::magic) {
    const auto poly = polytope_for(th, opt);
    MagicGaugeOptions mo;
    mo.tol = std::min(opt.tol, 1e-9);
    mo.max_iter = opt.max_iter;
    const L1Result l1 = magic_decomposition(psi, th.n, mo, &poly->dictionary);
    r.stats.solver_status = to_string(l1.status);
    r.stats.iterations = l1.iterations;
    r.value = detail::snap(std::max(0.0, l1.value * l1.value - 1.0));
    r.upper = l1.value * l1.value - 1.0;
    // y with |<v_i|y>| <= 1: W' = y y^H is dual feasible.
    r.lower = std::norm(l1.y.dot(psi)) - 1.0;
    r.witness = CMatrix(id - l1.y * l1.y.adjoint());
    r.witness_kind = "generalized";
  } else if (th.kind == TheoryKind::genuine) {
    const double g = genuine_gauge(*pure, th.parties);
    r.value = detail::snap(std::max(0.0, g * g - 1.0));
    r.lower = r.upper = g * g - 1.0;
  } else {
    const double g = pure_gauge(*pure, th);
    r.value = detail::snap(std::max(0.0, g * g - 1.0));
    r.upper = g * g - 1.0;
    const detail::DualVector dv = th.kind == TheoryKind::coherence ? detail::coherence_dual(psi, th.k)
                                                                  : detail::schmidt_dual(psi, th.da, th.db, th.k);
    r.lower = std::norm(dv.y.dot(psi)) - 1.0;
    r.witness = CMatrix(id - dv.y * dv.y.adjoint());
    r.witness_kind = "generalized";
  }
  detail::certify(r, opt);
  return r;
}

inline MeasureResult log_generalized_robustness(const DensityMatrix& rho, const TheoryDescriptor& th,
                                                const MeasureOptions& opt = {}) {
  MeasureResult r = generalized_robustness(rho, th, opt);
  r.name = "log_generalized_robustness";
  auto lg = [](double v) { return std::log2(1.0 + std::max(v, 0.0)); };
  r.value = detail::snap(lg(r.value));
  r.lower = lg(r.lower);
  r.upper = lg(r.upper);
  r.witness.reset();
  r.witness_kind.clear();
  return r;
}

// ---------------------------------------------------------------------------
// Best free approximation and modified trace distance

/// 1 - max { sum x : rho - sum x_i sigma_i >= 0, x >= 0 }.
inline MeasureResult best_free_approximation(const DensityMatrix& rho, const TheoryDescriptor& th,
                                             const MeasureOptions& opt = {}) {
  detail::check_dims(rho, th, "best_free_approximation");
  if (!th.is_polytope() && !opt.dictionary) {
    throw UnsupportedError("best_free_approximation: continuum free set " + th.to_string() + " is unsupported");
  }
  const auto poly = polytope_for(th, opt);
  const int n = poly->size();
  LinearProgram lp(n);
  lp.c.setConstant(-1.0);
  lp.add_le(RVector::Ones(n), 1.0);  // traces: sum x <= 1
  PsdBlock blk;
  blk.m0 = rho.matrix();
  for (int i = 0; i < n; ++i) blk.mi.push_back(-poly->projector(i));
  Restore restore = [&](const RVector& x) -> std::optional<RVector> {
    // Largest t in [0, 1] with rho - t S >= 0, by bisection.
    const CMatrix s = rho.matrix() - blk.at(x);
    double lo = 0.0, hi = 1.0;
    if (min_eigenvalue(rho.matrix() - s) >= 0.0) return x;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (min_eigenvalue(rho.matrix() - mid * s) >= 0.0) lo = mid;
      else hi = mid;
    }
    return RVector(lo * x);
  };
  const CuttingPlaneResult cp = cutting_plane_psd(lp, {blk}, detail::cp_options(rho, opt), restore);
  MeasureResult r;
  r.name = "best_free_approximation";
  r.stats.method = "cutting_plane";
  r.stats.solver_status = to_string(cp.status);
  r.stats.rounds = cp.rounds;
  r.stats.cuts = static_cast<int>(cp.record.cuts.size());
  if (cp.lp_status != LPStatus::optimal) return r;
  // LP maximum over the outer model overestimates the free weight.
  r.value = detail::snap(std::clamp(1.0 + cp.lower, 0.0, 1.0));
  r.lower = 1.0 + cp.lower;
  r.upper = cp.x_feasible ? 1.0 - cp.x_feasible->sum() : 1.0;
  detail::certify(r, opt);
  return r;
}

/// max -<rho, W> s.t. -I <= W <= I, <W, sigma_i> >= 0.
inline MeasureResult modified_trace_distance(const DensityMatrix& rho, const TheoryDescriptor& th,
                                             const MeasureOptions& opt = {}) {
  detail::check_dims(rho, th, "modified_trace_distance");
  if (!th.is_polytope() && !opt.dictionary) {
    throw UnsupportedError("modified_trace_distance: continuum free set " + th.to_string() + " is unsupported");
  }
  const auto poly = polytope_for(th, opt);
  const int d = rho.dim();
  const int m = d * d;
  LinearProgram lp(m);
  std::fill(lp.free_vars.begin(), lp.free_vars.end(), true);
  lp.c = hvec(rho.matrix());  // <rho, W> = hvec(rho) . hvec(W)
  for (int i = 0; i < poly->size(); ++i) lp.add_le(-poly->coords.col(i), 0.0);
  PsdBlock upper, lower;
  upper.m0 = CMatrix::Identity(d, d);
  lower.m0 = CMatrix::Identity(d, d);
  for (int j = 0; j < m; ++j) {
    const CMatrix basis = hmat(RVector::Unit(m, j));
    upper.mi.push_back(-basis);
    lower.mi.push_back(basis);
  }
  // Two feasible repairs, keep the better: rescale by the operator norm, or clip the
  // spectrum to [-1, 1] and shift by t I / (1 + t) to restore <sigma_i, W> >= 0.
  const RVector rho_vec = lp.c;
  Restore restore = [&, rho_vec](const RVector& x) -> std::optional<RVector> {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hmat(x));
    const RVector& ev = es.eigenvalues();
    const double op = ev.cwiseAbs().maxCoeff();
    if (op <= 1.0) return x;
    const RVector scaled = x / op;
    const CMatrix& u = es.eigenvectors();
    const CMatrix clipped = u * ev.cwiseMax(-1.0).cwiseMin(1.0).cast<cplx>().asDiagonal() * u.adjoint();
    RVector cx = hvec(clipped);
    const double t = std::max(0.0, -(poly->coords.transpose() * cx).minCoeff());
    cx = (cx + t * hvec(CMatrix::Identity(d, d))) / (1.0 + t);
    return rho_vec.dot(cx) < rho_vec.dot(scaled) ? cx : scaled;
  };
  const CuttingPlaneResult cp = cutting_plane_psd(lp, {upper, lower}, detail::cp_options(rho, opt), restore);
  MeasureResult r;
  r.name = "modified_trace_distance";
  r.stats.method = "cutting_plane";
  r.stats.solver_status = to_string(cp.status);
  r.stats.rounds = cp.rounds;
  r.stats.cuts = static_cast<int>(cp.record.cuts.size());
  if (cp.lp_status != LPStatus::optimal) return r;
  const RVector wx = cp.x_feasible ? *cp.x_feasible : RVector(RVector::Zero(m));
  r.lower = -lp.c.dot(wx);
  r.upper = -cp.lower;
  r.value = detail::snap(std::max(0.0, r.lower));
  r.witness = hmat(wx);
  r.witness_kind = "generalized";
  detail::certify(r, opt);
  return r;
}

// ---------------------------------------------------------------------------
// Nuclear gauge

/// min ||X||_l1 s.t. T X T^H = rho, T the vertex dictionary.
inline MeasureResult nuclear_gauge(const DensityMatrix& rho, const TheoryDescriptor& th, const MeasureOptions& opt = {}) {
  detail::check_dims(rho, th, "nuclear_gauge");
  if (!th.is_polytope() && !opt.dictionary) {
    throw UnsupportedError("nuclear_gauge: needs a vertex dictionary; " + th.to_string() + " has none");
  }
  const auto poly = polytope_for(th, opt);
  MeasureResult r;
  r.name = "nuclear_gauge";
  r.stats.method = "admm";
  const CMatrix& t = poly->dictionary;
  const CMatrix& rm = rho.matrix();
  const CVector b = Eigen::Map<const CVector>(rm.data(), rm.size());
  AdmmOptions ao;
  ao.tol = opt.tol;
  ao.max_iter = opt.max_iter;
  const L1Result l1 = admm_l1_affine(SandwichMap(t), b, ao);
  r.stats.solver_status = to_string(l1.status);
  r.stats.iterations = l1.iterations;
  if (l1.status == SolveStatus::infeasible) return detail::infinite("nuclear_gauge", "admm");
  // Gamma_W >= 1 on density matrices; a certified value within tol of 1 is 1.
  r.upper = l1.value;
  r.lower = std::max(l1.lower, 1.0);
  r.value = l1.value - 1.0 <= opt.tol * (1.0 + l1.value) ? 1.0 : l1.value;
  detail::certify(r, opt);
  return r;
}

// ---------------------------------------------------------------------------
// Negativity

inline double negativity(const DensityMatrix& rho, int da, int db) {
  if (da * db != rho.dim()) throw std::invalid_argument("negativity: dims mismatch");
  const Hermitian pt = partial_transpose(rho.matrix(), Dims{da, db}, 1);
  return std::max(0.0, (trace_norm(pt) - 1.0) / 2.0);
}

// ---------------------------------------------------------------------------
// Convex roof

inline MeasureResult convex_roof_upper(const DensityMatrix& rho, const TheoryDescriptor& th,
                                       const MeasureOptions& opt = {}) {
  detail::check_dims(rho, th, "convex_roof_upper");
  const bool polytope = th.is_polytope() || static_cast<bool>(opt.dictionary);
  std::shared_ptr<const PolytopeFreeSet> poly;
  if (polytope) poly = polytope_for(th, opt);
  const Dims dims = th.state_dims();
  // The ADMM primal value is feasible, so a loose tolerance still bounds g from above.
  std::optional<DenseMap> op;
  if (th.kind == TheoryKind::magic) op.emplace(poly->dictionary);
  AdmmOptions ao;
  ao.tol = as_pure(rho) ? 1e-10 : 1e-7;
  PureObjective g = [&](const CVector& v) {
    if (op && max_overlap_sq(v, poly->dictionary) >= 1.0 - 1e-12) return 1.0;
    const double gv = op ? admm_l1_affine(*op, v, ao).value : pure_gauge(StateVector(dims, v, 1e-8), th);
    return gv * gv;
  };
  MeasureResult r;
  r.name = "convex_roof_upper";
  r.stats.method = "ensemble_descent";
  r.direction = BoundDirection::upper;
  EnsembleOptions eo;
  eo.restarts = opt.restarts;
  eo.seed = opt.seed;
  if (polytope) {
    const MembershipCertificate mc = free_membership(rho, *poly);
    if (mc.inside) {
      std::vector<int> support;
      for (int i = 0; i < poly->size(); ++i) {
        if ((*mc.weights)(i) > 1e-14) support.push_back(i);
      }
      CMatrix seed(rho.dim(), support.size());
      for (std::size_t j = 0; j < support.size(); ++j) {
        seed.col(j) = std::sqrt((*mc.weights)(support[j])) * poly->dictionary.col(support[j]);
      }
      eo.seed_ensembles.push_back(seed);
    }
  }
  // Lower bounds: polytopes via nuclear gauge and R_g + 1; Schmidt k = 1 via negativity.
  const bool pure = as_pure(rho).has_value();
  double lower = 1.0;
  if (!pure && polytope) {
    const MeasureResult nu = nuclear_gauge(rho, th, opt);
    if (std::isfinite(nu.lower)) lower = std::max(lower, nu.lower);
    const MeasureResult rg = generalized_robustness(rho, th, opt);
    if (std::isfinite(rg.lower)) lower = std::max(lower, rg.lower + 1.0);
  } else if (!pure && th.kind == TheoryKind::schmidt && th.k == 1) {
    lower = std::max(lower, 2.0 * negativity(rho, th.da, th.db) + 1.0);
  }
  eo.floor = lower;
  eo.floor_tol = 1e-7;
  if (op && !pure) eo.rel_tol = 1e-6;  // above the noise of the loose inner solve
  const EnsembleResult er = ensemble_optimize(rho.matrix(), g, eo);
  r.value = er.value;
  r.upper = er.value;
  r.stats.iterations = er.best_restart;
  if (pure) lower = er.value;
  r.lower = std::min(lower, r.upper);
  detail::certify(r, opt);
  return r;
}

// ---------------------------------------------------------------------------
// Geometric measure

namespace detail {

struct FidelityObjective {
  CMatrix sqrt_rho;
  const PolytopeFreeSet* poly;

  // sigma = B B^H with B = T diag(sqrt x), so sqrt F = sum of singular values of
  // sqrt(rho) B. The SVD keeps null directions at roundoff level, where eigenvalue
  // square roots of sqrt(rho) sigma sqrt(rho) would amplify them to ~1e-8.
  Eigen::JacobiSVD<CMatrix> svd(const RVector& x) const {
    const CMatrix b = poly->dictionary * x.cwiseMax(0.0).cwiseSqrt().cast<cplx>().asDiagonal();
    return Eigen::JacobiSVD<CMatrix>(sqrt_rho * b, Eigen::ComputeThinU);
  }

  double value(const RVector& x) const { return svd(x).singularValues().sum(); }

  // d/dx_i = <v_i| G |v_i>, G = 1/2 sqrt(rho) (sqrt(rho) sigma sqrt(rho))^{-1/2} sqrt(rho).
  // The root is floored rather than cut: at a singular sigma the directions in the
  // range of rho must keep their (large) slope, while the kernel of the cleaned
  // sqrt(rho) contributes nothing either way.
  RVector gradient(const RVector& x) const {
    const CMatrix b = poly->dictionary * x.cwiseMax(0.0).cwiseSqrt().cast<cplx>().asDiagonal();
    const Eigen::JacobiSVD<CMatrix> dec(sqrt_rho * b, Eigen::ComputeFullU);
    const RVector& sv = dec.singularValues();
    RVector inv = RVector::Zero(sqrt_rho.rows());
    const double floor = 1e-9 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    for (Eigen::Index k = 0; k < inv.size(); ++k) inv(k) = 1.0 / std::sqrt(std::max(k < sv.size() ? sv(k) : 0.0, floor));
    const CMatrix z = inv.cast<cplx>().asDiagonal() * dec.matrixU().adjoint() * sqrt_rho * poly->dictionary;
    return 0.5 * z.colwise().squaredNorm().transpose();
  }
};

}  // namespace detail

/// 1 - max_sigma F(rho, sigma)^2 over free sigma (F the root fidelity).
inline MeasureResult geometric_measure(const DensityMatrix& rho, const TheoryDescriptor& th,
                                       const MeasureOptions& opt = {}) {
  detail::check_dims(rho, th, "geometric_measure");
  const bool polytope = th.is_polytope() || static_cast<bool>(opt.dictionary);
  const auto pure = as_pure(rho);
  MeasureResult r;
  r.name = "geometric_measure";
  if (pure && opt.route != Route::solver) {
    r.stats.method = "closed_form";
    const CMatrix* dict = polytope ? &polytope_for(th, opt)->dictionary : nullptr;
    r.value = detail::snap(geometric_pure(*pure, th, dict));
    r.lower = r.upper = r.value;
    r.status = MeasureStatus::ok;
    return r;
  }
  if (!polytope) throw UnsupportedError("geometric_measure: mixed states are unsupported for " + th.to_string());
  const auto poly = polytope_for(th, opt);
  // Roundoff eigenvalues of rho would leave ~1e-8 spurious directions in sqrt(rho).
  const double lmax = max_eigenvalue(rho.matrix());
  const CMatrix sqrt_rho = spectral_map(rho.matrix(), [lmax](double l) { return l > 1e-14 * lmax ? std::sqrt(l) : 0.0; });
  detail::FidelityObjective obj{sqrt_rho, poly.get()};
  FrankWolfeOptions fo;
  fo.tol = 1e-9;
  fo.max_iter = std::min(opt.max_iter, 20000);
  const RVector x0 = RVector::Constant(poly->size(), 1.0 / poly->size());
  const FrankWolfeResult fw = frank_wolfe_maximize([&](const RVector& x) { return obj.value(x); },
                                                   [&](const RVector& x) { return obj.gradient(x); }, x0, fo);
  r.stats.method = "frank_wolfe";
  r.stats.solver_status = to_string(fw.status);
  r.stats.iterations = fw.iterations;
  const double f = std::min(fw.value, 1.0);
  const double f_hi = std::min(fw.value + fw.gap, 1.0);
  r.value = detail::snap(std::clamp(1.0 - f * f, 0.0, 1.0));
  r.upper = 1.0 - f * f;
  r.lower = 1.0 - f_hi * f_hi;
  r.direction = BoundDirection::upper;
  detail::certify(r, opt);
  return r;
}

/// Frank-Wolfe gap in root-fidelity units for the last mixed-path run.
inline double fidelity_gap(const MeasureResult& geometric) {
  return std::sqrt(std::max(0.0, 1.0 - geometric.lower)) - std::sqrt(std::max(0.0, 1.0 - geometric.upper));
}

// ---------------------------------------------------------------------------
// Lookup by name

inline const std::vector<std::string>& measure_names() {
  static const std::vector<std::string> names = {
      "standard_robustness", "base_gauge",          "generalized_robustness",  "log_generalized_robustness",
      "random_robustness",   "best_free_approximation", "modified_trace_distance", "nuclear_gauge",
      "convex_roof_upper",   "geometric_measure",   "negativity",              "polar_gauge",
      "pure_gauge"};
  return names;
}

inline MeasureResult evaluate_measure(const std::string& name, const DensityMatrix& rho, const TheoryDescriptor& th,
                                      const MeasureOptions& opt = {}) {
  if (name == "standard_robustness") return standard_robustness(rho, th, opt);
  if (name == "base_gauge") return base_gauge(rho, th, opt);
  if (name == "generalized_robustness") return generalized_robustness(rho, th, opt);
  if (name == "log_generalized_robustness") return log_generalized_robustness(rho, th, opt);
  if (name == "random_robustness") return random_robustness(rho, th, opt);
  if (name == "best_free_approximation") return best_free_approximation(rho, th, opt);
  if (name == "modified_trace_distance") return modified_trace_distance(rho, th, opt);
  if (name == "nuclear_gauge") return nuclear_gauge(rho, th, opt);
  if (name == "convex_roof_upper") return convex_roof_upper(rho, th, opt);
  if (name == "geometric_measure") return geometric_measure(rho, th, opt);
  if (name == "negativity") {
    if (th.kind != TheoryKind::schmidt) throw UnsupportedError("negativity: needs a bipartite (schmidt) theory");
    detail::check_dims(rho, th, "negativity");
    MeasureResult r;
    r.name = name;
    r.value = negativity(rho, th.da, th.db);
    r.lower = r.upper = r.value;
    r.status = MeasureStatus::ok;
    r.stats.method = "partial_transpose";
    return r;
  }
  if (name == "polar_gauge") {
    detail::check_dims(rho, th, "polar_gauge");
    const PolarResult p = polar_gauge_psd(rho.matrix(), th, opt);
    MeasureResult r;
    r.name = name;
    r.value = p.value;
    r.lower = p.value;
    r.upper = p.heuristic ? std::numeric_limits<double>::infinity() : p.value;
    r.direction = p.heuristic ? BoundDirection::lower : BoundDirection::exact;
    r.status = MeasureStatus::ok;
    r.stats.method = p.heuristic ? "local_search" : "exact";
    return r;
  }
  if (name == "pure_gauge") {
    detail::check_dims(rho, th, "pure_gauge");
    const auto pure = as_pure(rho);
    if (!pure) throw UnsupportedError("pure_gauge: input is not a pure state");
    MeasureResult r;
    r.name = name;
    const CMatrix* dict = (th.is_polytope() || opt.dictionary) ? &polytope_for(th, opt)->dictionary : nullptr;
    r.value = pure_gauge(*pure, th, dict);
    r.lower = r.upper = r.value;
    r.status = MeasureStatus::ok;
    r.stats.method = "closed_form";
    return r;
  }
  throw UnsupportedError("unknown measure '" + name + "'");
}

}  // namespace qgauge
