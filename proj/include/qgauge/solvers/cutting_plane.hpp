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

// LP with linear matrix inequalities M_j(x) = M0_j + sum_i x_i M_ij >= 0, handled
// by an outer polyhedral model: every eigenvector w with a negative eigenvalue at
// the LP optimum becomes a cut  w^H M_j(x) w >= 0.

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "qgauge/linalg.hpp"
#include "qgauge/solvers/admm.hpp"
#include "qgauge/solvers/simplex.hpp"

namespace qgauge {

struct PsdBlock {
  CMatrix m0;
  std::vector<CMatrix> mi;  // one Hermitian matrix per LP variable

  int dim() const { return static_cast<int>(m0.rows()); }

  CMatrix at(const RVector& x) const {
    CMatrix m = m0;
    for (std::size_t i = 0; i < mi.size(); ++i) {
      if (x(i) != 0.0) m += x(i) * mi[i];
    }
    return m;
  }
};

struct Cut {
  CVector w;
  int block = 0;
  int row_id = -1;  // LP inequality id
};

struct CutRecord {
  std::vector<Cut> cuts;              // cuts currently in the model
  int total_added = 0;
  double final_min_eigenvalue = 0.0;  // over all blocks at the final LP point
  std::vector<double> lower_bounds;   // LP objective per round
};

struct CuttingPlaneOptions {
  double eps_psd = 1e-8;   // keep above lp.tol: a looser LP re-violates its own cuts
  int max_rounds = 500;
  double dedup = 1e-6;     // cuts are duplicates when |<w, w'>| > 1 - dedup
  double dedup_fallback = 5e-13;  // 1 - cos(1e-6): angle test used when every cut is a duplicate
  bool seed_cuts = true;   // basis vectors and pair superpositions per block
  int prune_threshold = 0; // prune slack cuts once this many are held (0: 4 * vars + 64)
  double gap_tol = 0.0;    // > 0: stop once restore(x) is within gap_tol (1 + |lower|) of the LP bound
  SimplexOptions lp;
};

struct CuttingPlaneResult {
  SolveStatus status = SolveStatus::max_iterations;
  LPStatus lp_status = LPStatus::stalled;
  RVector x;                 // LP optimum of the final cut model
  double lower = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::infinity();
  std::optional<RVector> x_feasible;
  std::vector<double> cut_duals;  // aligned with record.cuts
  RVector base_eq_duals;
  RVector base_ineq_duals;
  CutRecord record;
  int rounds = 0;
};

namespace detail {

inline std::vector<CVector> seed_vectors(int b) {
  std::vector<CVector> out;
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < b; ++j) out.push_back(CVector::Unit(b, j));
  for (int j = 0; j < b; ++j) {
    for (int k = j + 1; k < b; ++k) {
      for (cplx ph : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}) {
        CVector v = CVector::Zero(b);
        v(j) = s;
        v(k) = s * ph;
        out.push_back(v);
      }
    }
  }
  return out;
}

// Cut  -sum_i x_i w^H M_i w <= w^H M0 w.
inline std::pair<RVector, double> cut_row(const PsdBlock& blk, const CVector& w) {
  RVector g(blk.mi.size());
  for (std::size_t i = 0; i < blk.mi.size(); ++i) g(i) = -w.dot(blk.mi[i] * w).real();
  return {g, w.dot(blk.m0 * w).real()};
}

}  // namespace detail

/// Restoration maps a near-feasible x to a PSD-feasible one (or nullopt).
using Restore = std::function<std::optional<RVector>(const RVector&)>;

inline CuttingPlaneResult cutting_plane_psd(const LinearProgram& base, const std::vector<PsdBlock>& blocks,
                                            CuttingPlaneOptions opt = {}, const Restore& restore = {}) {
  const int n = base.num_vars();
  for (const auto& blk : blocks) {
    if (static_cast<int>(blk.mi.size()) != n) throw std::invalid_argument("cutting_plane_psd: block size mismatch");
  }
  CuttingPlaneResult res;
  LinearProgram lp = base;
  const int base_le = static_cast<int>(base.G.rows());
  std::vector<Cut> cuts;
  if (opt.seed_cuts) {
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
      for (const CVector& w : detail::seed_vectors(blocks[bi].dim())) {
        auto [g, h] = detail::cut_row(blocks[bi], w);
        lp.add_le(g, h);
        cuts.push_back({w, static_cast<int>(bi), static_cast<int>(lp.G.rows()) - 1});
      }
    }
  }
  const int num_seeds = static_cast<int>(cuts.size());
  const int prune_at = opt.prune_threshold > 0 ? opt.prune_threshold : 4 * n + 64 + num_seeds;
  Simplex simplex(lp, opt.lp);
  LPSolution sol = simplex.solve();
  res.record.total_added = num_seeds;

  int round = 0;
  for (;; ++round) {
    res.lp_status = sol.status;
    if (sol.status == LPStatus::optimal && !sol.x.allFinite()) sol.status = LPStatus::stalled;
    if (sol.status != LPStatus::optimal) {
      res.status = sol.status == LPStatus::infeasible ? SolveStatus::infeasible : SolveStatus::max_iterations;
      break;
    }
    res.record.lower_bounds.push_back(sol.objective);
    double min_eig = std::numeric_limits<double>::infinity();
    std::vector<std::pair<int, CVector>> violated;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(blocks[bi].at(sol.x));
      min_eig = std::min(min_eig, es.eigenvalues()(0));
      for (Eigen::Index e = 0; e < es.eigenvalues().size(); ++e) {
        if (es.eigenvalues()(e) >= -opt.eps_psd) break;
        violated.emplace_back(static_cast<int>(bi), es.eigenvectors().col(e));
      }
    }
    res.record.final_min_eigenvalue = blocks.empty() ? 0.0 : min_eig;
    if (min_eig >= -opt.eps_psd) {
      res.status = SolveStatus::converged;
      break;
    }
    if (round > 0 && restore && opt.gap_tol > 0.0) {
      const std::optional<RVector> xf = restore(sol.x);
      if (xf && base.c.dot(*xf) - sol.objective <= opt.gap_tol * (1.0 + std::abs(sol.objective))) {
        res.status = SolveStatus::converged;
        break;
      }
    }
    if (round + 1 >= opt.max_rounds) {
      res.status = SolveStatus::max_iterations;
      break;
    }
    auto add_cuts = [&](double dedup) {
      int count = 0;
      for (const auto& [bi, w] : violated) {
        bool dup = false;
        for (const Cut& c : cuts) {
          if (c.block == bi && std::abs(c.w.dot(w)) > 1.0 - dedup) {
            dup = true;
            break;
          }
        }
        if (dup) continue;
        auto [g, h] = detail::cut_row(blocks[bi], w);
        const int id = simplex.add_le_row(g, h);
        cuts.push_back({w, bi, id});
        ++count;
      }
      return count;
    };
    int added = add_cuts(opt.dedup);
    // Every cut was a near-duplicate: fall back to the angle test before giving up.
    if (added == 0 && opt.dedup_fallback < opt.dedup) added = add_cuts(opt.dedup_fallback);
    if (added == 0) {
      res.status = SolveStatus::stalled;
      break;
    }
    res.record.total_added += added;
    if (static_cast<int>(cuts.size()) > prune_at) {
      // Drop non-binding cuts (seeds stay to keep the model bounded).
      std::vector<int> slack = simplex.slack_rows(1e-9);
      std::vector<int> drop;
      for (int id : slack) {
        if (id >= base_le + num_seeds) drop.push_back(id);
      }
      simplex.drop_rows(drop);
      std::erase_if(cuts, [&](const Cut& c) { return std::find(drop.begin(), drop.end(), c.row_id) != drop.end(); });
    }
    sol = simplex.reoptimize();
    if (sol.status != LPStatus::optimal || !sol.x.allFinite()) {
      // Warm start broke down (near-parallel cuts): solve the current model afresh.
      LinearProgram full = base;
      for (Cut& c : cuts) {
        auto [g, h] = detail::cut_row(blocks[c.block], c.w);
        full.add_le(g, h);
        c.row_id = static_cast<int>(full.G.rows()) - 1;
      }
      simplex = Simplex(full, opt.lp);
      sol = simplex.solve();
    }
  }
  res.rounds = round + 1;
  res.x = sol.x;
  if (sol.status == LPStatus::optimal) {
    res.lower = sol.objective;
    res.cut_duals.reserve(cuts.size());
    // Cuts added after the last solve have no dual yet.
    for (const Cut& c : cuts) res.cut_duals.push_back(c.row_id < sol.ineq_duals.size() ? sol.ineq_duals(c.row_id) : 0.0);
    res.base_eq_duals = sol.eq_duals;
    res.base_ineq_duals = sol.ineq_duals.head(base_le);
    if (restore) {
      res.x_feasible = restore(sol.x);
      if (res.x_feasible) res.upper = base.c.dot(*res.x_feasible);
    }
  }
  res.record.cuts = std::move(cuts);
  return res;
}

}  // namespace qgauge
