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

// Dense tableau simplex: two-phase primal with Bland's rule, plus dual simplex
// reoptimization after appending <= rows (used by the cutting-plane solver).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgauge/linalg.hpp"

namespace qgauge {

/// min c'x  s.t.  A x = b,  G x <= h,  x_j >= 0 unless free_vars[j].
struct LinearProgram {
  RVector c;
  RMatrix A;
  RVector b;
  RMatrix G;
  RVector h;
  std::vector<bool> free_vars;

  LinearProgram() = default;
  explicit LinearProgram(int n)
      : c(RVector::Zero(n)), A(0, n), b(0), G(0, n), h(0), free_vars(n, false) {}

  int num_vars() const { return static_cast<int>(c.size()); }

  void add_eq(const RVector& row, double rhs) {
    A.conservativeResize(A.rows() + 1, num_vars());
    A.row(A.rows() - 1) = row.transpose();
    b.conservativeResize(b.size() + 1);
    b(b.size() - 1) = rhs;
  }

  void add_le(const RVector& row, double rhs) {
    G.conservativeResize(G.rows() + 1, num_vars());
    G.row(G.rows() - 1) = row.transpose();
    h.conservativeResize(h.size() + 1);
    h(h.size() - 1) = rhs;
  }

  void validate() const {
    const auto n = c.size();
    if (A.cols() != n || G.cols() != n || A.rows() != b.size() || G.rows() != h.size() ||
        static_cast<Eigen::Index>(free_vars.size()) != n) {
      throw std::invalid_argument("LinearProgram: inconsistent dimensions");
    }
    if (!c.allFinite() || !A.allFinite() || !b.allFinite() || !G.allFinite() || !h.allFinite()) {
      throw std::invalid_argument("LinearProgram: non-finite data");
    }
  }
};

enum class LPStatus { optimal, infeasible, unbounded, stalled };

inline const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::optimal: return "optimal";
    case LPStatus::infeasible: return "infeasible";
    case LPStatus::unbounded: return "unbounded";
    case LPStatus::stalled: return "stalled";
  }
  return "?";
}

/// Duals follow  max b'l - h'm  s.t.  A'l - G'm <= c (= c on free columns), m >= 0.
/// On infeasibility (farkas_eq, farkas_ineq) = y satisfies A'y_A + G'y_G <= 0, y_G <= 0,
/// b'y_A + h'y_G > 0.
struct LPSolution {
  LPStatus status = LPStatus::stalled;
  RVector x;
  double objective = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  RVector eq_duals;
  RVector ineq_duals;
  RVector farkas_eq;
  RVector farkas_ineq;
};

struct SimplexOptions {
  double tol = 1e-9;         // reduced-cost and feasibility tolerance
  double pivot_tol = 1e-9;   // smallest admissible pivot magnitude
  int max_pivots = 200000;
  int refactor_every = 50;
};

class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp, SimplexOptions opt = {}) : opt_(opt), n_(lp.num_vars()) {
    lp.validate();
    // Structural columns: x_j = p_j - q_j for free variables.
    for (int j = 0; j < n_; ++j) {
      pos_.push_back(add_column(Kind::structural, -1, lp.c(j)));
      neg_.push_back(lp.free_vars[j] ? add_column(Kind::structural, -1, -lp.c(j)) : -1);
    }
    for (Eigen::Index i = 0; i < lp.A.rows(); ++i) add_row_data(true, static_cast<int>(i), lp.A.row(i).transpose(), lp.b(i));
    for (Eigen::Index i = 0; i < lp.G.rows(); ++i) add_row_data(false, next_le_id_++, lp.G.row(i).transpose(), lp.h(i));
    num_eq_ = static_cast<int>(lp.A.rows());
  }

  /// Two-phase primal simplex from scratch.
  LPSolution solve() {
    pivots_ = 0;
    const int m = static_cast<int>(rows_.size());
    // Initial basis: slack for <= rows with h >= 0, otherwise a signed artificial.
    basis_.assign(m, -1);
    for (int r = 0; r < m; ++r) {
      if (!rows_[r].eq && rhs_(r) >= 0.0) {
        basis_[r] = rows_[r].slack;
      } else {
        const int a = add_column(Kind::artificial, r, 0.0);
        R_(r, a) = rhs_(r) >= 0.0 ? 1.0 : -1.0;
        basis_[r] = a;
      }
    }
    refactor();
    bool has_art = false;
    for (const auto& c : cols_) has_art = has_art || c.kind == Kind::artificial;
    if (has_art) {
      RVector phase1 = RVector::Zero(cols_.size());
      for (std::size_t j = 0; j < cols_.size(); ++j) phase1(j) = cols_[j].kind == Kind::artificial ? 1.0 : 0.0;
      set_costs(phase1);
      const LPStatus s1 = primal_loop();
      if (s1 == LPStatus::stalled) return finish(LPStatus::stalled);
      refactor();
      const double infeas = basic_objective(phase1);
      if (infeas > opt_.tol * (1.0 + rhs_.cwiseAbs().maxCoeff())) {
        LPSolution out = finish(LPStatus::infeasible);
        const RVector y = duals_for(phase1);
        out.farkas_eq = RVector::Zero(num_eq_);
        out.farkas_ineq = RVector::Zero(next_le_id_);
        for (std::size_t r = 0; r < rows_.size(); ++r) {
          if (rows_[r].eq) out.farkas_eq(rows_[r].id) = y(r);
          else out.farkas_ineq(rows_[r].id) = y(r);
        }
        drop_artificials();
        return out;
      }
      drive_out_artificials();
      drop_artificials();
    }
    set_costs(costs());
    return finish(primal_loop());
  }

  /// Appends G-row g'x <= h (original variable space). Returns its row id.
  int add_le_row(const RVector& g, double h) {
    if (g.size() != n_) throw std::invalid_argument("Simplex::add_le_row: wrong length");
    const int id = next_le_id_++;
    add_row_data(false, id, g, h);
    const int r = static_cast<int>(rows_.size()) - 1;
    const int slack = rows_[r].slack;
    if (basis_.size() + 1 == rows_.size()) {
      // Express the new row in the current basis.
      const int ncols = static_cast<int>(cols_.size());
      T_.conservativeResize(r + 1, ncols);
      T_.col(slack).setZero();
      beta_.conservativeResize(r + 1);
      RVector row = R_.row(r).transpose();
      double rhs = rhs_(r);
      for (int i = 0; i < r; ++i) {
        const double coef = R_(r, basis_[i]);
        if (coef != 0.0) {
          row -= coef * T_.row(i).transpose();
          rhs -= coef * beta_(i);
        }
      }
      row(slack) = 1.0;
      T_.row(r) = row.transpose();
      beta_(r) = rhs;
      basis_.push_back(slack);
      d_.conservativeResize(ncols);
      d_(slack) = 0.0;
      cost_.conservativeResize(ncols);
      cost_(slack) = 0.0;
    }
    return id;
  }

  /// Dual simplex after add_le_row, followed by a primal cleanup pass.
  LPSolution reoptimize() {
    // add_le_row keeps the tableau current; refactoring is left to the pivot count.
    pivots_ = 0;
    LPStatus s = dual_loop();
    if (s == LPStatus::optimal) s = primal_loop();
    if (s == LPStatus::optimal && !healthy()) {
      refactor();
      if (!healthy()) s = LPStatus::stalled;  // near-singular basis: caller should rebuild
    }
    return finish(s);
  }

  /// Ids of <= rows whose slack is basic with value above `tol` (not binding).
  std::vector<int> slack_rows(double tol) const {
    std::vector<int> out;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (!rows_[r].eq && basis_[r] == rows_[r].slack && beta_(r) > tol) out.push_back(rows_[r].id);
    }
    return out;
  }

  /// Removes <= rows (by id) whose slack is basic; other ids are ignored.
  void drop_rows(const std::vector<int>& ids) {
    std::vector<int> keep_rows, keep_cols;
    std::vector<bool> dropped_col(cols_.size(), false);
    std::vector<bool> drop(rows_.size(), false);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (rows_[r].eq || basis_[r] != rows_[r].slack) continue;
      if (std::find(ids.begin(), ids.end(), rows_[r].id) != ids.end()) {
        drop[r] = true;
        dropped_col[rows_[r].slack] = true;
      }
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (!drop[r]) keep_rows.push_back(static_cast<int>(r));
    }
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      if (!dropped_col[j]) keep_cols.push_back(static_cast<int>(j));
    }
    if (keep_rows.size() == rows_.size()) return;
    restrict_to(keep_rows, keep_cols);
  }

  int num_rows() const { return static_cast<int>(rows_.size()); }

 private:
  enum class Kind { structural, slack, artificial };
  struct Col {
    Kind kind;
    int row;  // owning row for slack/artificial
    double cost;
  };
  struct Row {
    bool eq;
    int id;
    int slack;  // column index, -1 for equality rows
  };

  int add_column(Kind kind, int row, double cost) {
    cols_.push_back({kind, row, cost});
    R_.conservativeResize(R_.rows(), static_cast<Eigen::Index>(cols_.size()));
    R_.col(R_.cols() - 1).setZero();
    return static_cast<int>(cols_.size()) - 1;
  }

  void add_row_data(bool eq, int id, const RVector& coeffs, double rhs) {
    const int r = static_cast<int>(rows_.size());
    R_.conservativeResize(r + 1, R_.cols());
    R_.row(r).setZero();
    for (int j = 0; j < n_; ++j) {
      R_(r, pos_[j]) = coeffs(j);
      if (neg_[j] >= 0) R_(r, neg_[j]) = -coeffs(j);
    }
    rhs_.conservativeResize(r + 1);
    rhs_(r) = rhs;
    rows_.push_back({eq, id, -1});
    if (!eq) {
      const int s = add_column(Kind::slack, r, 0.0);
      R_(r, s) = 1.0;
      rows_.back().slack = s;
    }
  }

  RVector costs() const {
    RVector c(cols_.size());
    for (std::size_t j = 0; j < cols_.size(); ++j) c(j) = cols_[j].cost;
    return c;
  }

  void set_costs(const RVector& c) {
    cost_ = c;
    recompute_reduced_costs();
  }

  void recompute_reduced_costs() {
    RVector cb(basis_.size());
    for (std::size_t r = 0; r < basis_.size(); ++r) cb(r) = cost_(basis_[r]);
    d_ = cost_ - T_.transpose() * cb;
    for (int b : basis_) d_(b) = 0.0;
  }

  double basic_objective(const RVector& c) const {
    double z = 0.0;
    for (std::size_t r = 0; r < basis_.size(); ++r) z += c(basis_[r]) * beta_(r);
    return z;
  }

  RMatrix basis_matrix() const {
    const int m = static_cast<int>(rows_.size());
    RMatrix B(m, m);
    for (int r = 0; r < m; ++r) B.col(r) = R_.col(basis_[r]);
    return B;
  }

  // y = B^{-T} c_B
  RVector duals_for(const RVector& c) const {
    const int m = static_cast<int>(rows_.size());
    if (m == 0) return RVector(0);
    RVector cb(m);
    for (int r = 0; r < m; ++r) cb(r) = c(basis_[r]);
    return basis_matrix().transpose().partialPivLu().solve(cb);
  }

  void refactor() {
    since_refactor_ = 0;
    const int m = static_cast<int>(rows_.size());
    if (m == 0) {
      T_.resize(0, cols_.size());
      beta_.resize(0);
    } else {
      Eigen::PartialPivLU<RMatrix> lu(basis_matrix());
      T_ = lu.solve(R_);
      beta_ = lu.solve(rhs_);
      for (int r = 0; r < m; ++r) {
        T_.col(basis_[r]).setZero();
        T_(r, basis_[r]) = 1.0;
      }
    }
    if (cost_.size() == static_cast<Eigen::Index>(cols_.size())) recompute_reduced_costs();
  }

  void pivot(int r, int j) {
    const double p = T_(r, j);
    T_.row(r) /= p;
    beta_(r) /= p;
    for (Eigen::Index i = 0; i < T_.rows(); ++i) {
      if (i == r) continue;
      const double f = T_(i, j);
      if (f != 0.0) {
        T_.row(i) -= f * T_.row(r);
        beta_(i) -= f * beta_(r);
        T_(i, j) = 0.0;
      }
    }
    const double fd = d_(j);
    if (fd != 0.0) {
      d_ -= fd * T_.row(r).transpose();
      d_(j) = 0.0;
    }
    basis_[r] = j;
    ++pivots_;
    ++total_pivots_;
    if (++since_refactor_ >= opt_.refactor_every) refactor();
  }

  // Finite tableau whose basic solution satisfies the original rows.
  bool healthy() const {
    if (!beta_.allFinite() || !d_.allFinite()) return false;
    RVector v = RVector::Zero(cols_.size());
    for (std::size_t r = 0; r < basis_.size(); ++r) v(basis_[r]) = beta_(r);
    return (R_ * v - rhs_).cwiseAbs().maxCoeff() <= 1e3 * feas_tol();
  }

  bool enterable(int j) const { return cols_[j].kind != Kind::artificial; }

  double feas_tol() const { return opt_.tol * (1.0 + (rhs_.size() ? rhs_.cwiseAbs().maxCoeff() : 0.0)); }

  double cost_tol() const { return opt_.tol * (1.0 + (cost_.size() ? cost_.cwiseAbs().maxCoeff() : 0.0)); }

  // Primal simplex with Bland's rule; assumes a primal feasible basis.
  LPStatus primal_loop() {
    std::vector<bool> basic(cols_.size(), false);
    while (true) {
      std::fill(basic.begin(), basic.end(), false);
      for (int b : basis_) basic[b] = true;
      int enter = -1;
      const double dtol = cost_tol();
      for (std::size_t j = 0; j < cols_.size(); ++j) {
        if (!basic[j] && enterable(static_cast<int>(j)) && d_(j) < -dtol) {
          enter = static_cast<int>(j);
          break;
        }
      }
      if (enter < 0) return LPStatus::optimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < T_.rows(); ++r) {
        const double a = T_(r, enter);
        if (a <= opt_.pivot_tol) continue;
        const double ratio = std::max(beta_(r), 0.0) / a;
        if (leave < 0 || ratio < best - 1e-12 * (1.0 + best)) {
          best = ratio;
          leave = static_cast<int>(r);
        } else if (ratio <= best + 1e-12 * (1.0 + best) && basis_[r] < basis_[leave]) {
          best = std::min(best, ratio);
          leave = static_cast<int>(r);
        }
      }
      if (leave < 0) return LPStatus::unbounded;
      if (pivots_ >= opt_.max_pivots) return LPStatus::stalled;
      pivot(leave, enter);
    }
  }

  // Dual simplex; assumes dual feasibility (d >= -tol). Bland-style index rules.
  LPStatus dual_loop() {
    std::vector<bool> basic(cols_.size(), false);
    while (true) {
      const double ftol = feas_tol();
      int leave = -1;
      for (Eigen::Index r = 0; r < beta_.size(); ++r) {
        if (beta_(r) < -ftol && (leave < 0 || basis_[r] < basis_[leave])) leave = static_cast<int>(r);
      }
      if (leave < 0) return LPStatus::optimal;
      std::fill(basic.begin(), basic.end(), false);
      for (int b : basis_) basic[b] = true;
      int enter = -1;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < cols_.size(); ++j) {
        if (basic[j] || !enterable(static_cast<int>(j))) continue;
        const double a = T_(leave, j);
        if (a >= -opt_.pivot_tol) continue;
        const double ratio = std::max(d_(j), 0.0) / -a;
        if (enter < 0 || ratio < best - 1e-12 * (1.0 + best)) {
          best = ratio;
          enter = static_cast<int>(j);
        }
      }
      if (enter < 0) return LPStatus::infeasible;
      if (pivots_ >= opt_.max_pivots) return LPStatus::stalled;
      pivot(leave, enter);
    }
  }

  void drive_out_artificials() {
    std::vector<int> redundant;
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      if (cols_[basis_[r]].kind != Kind::artificial) continue;
      int best = -1;
      double mag = 1e-9;
      std::vector<bool> basic(cols_.size(), false);
      for (int b : basis_) basic[b] = true;
      for (std::size_t j = 0; j < cols_.size(); ++j) {
        if (basic[j] || cols_[j].kind == Kind::artificial) continue;
        if (std::abs(T_(r, j)) > mag) {
          mag = std::abs(T_(r, j));
          best = static_cast<int>(j);
        }
      }
      if (best >= 0) pivot(static_cast<int>(r), best);
      else redundant.push_back(static_cast<int>(r));
    }
    if (!redundant.empty()) {
      std::vector<int> keep_rows, keep_cols;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (std::find(redundant.begin(), redundant.end(), static_cast<int>(r)) == redundant.end()) {
          keep_rows.push_back(static_cast<int>(r));
        }
      }
      for (std::size_t j = 0; j < cols_.size(); ++j) keep_cols.push_back(static_cast<int>(j));
      for (int r : redundant) {
        if (rows_[r].eq) redundant_eq_.push_back(rows_[r].id);
      }
      restrict_to(keep_rows, keep_cols);
    }
  }

  void drop_artificials() {
    std::vector<int> keep_rows(rows_.size()), keep_cols;
    std::iota(keep_rows.begin(), keep_rows.end(), 0);
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      if (cols_[j].kind != Kind::artificial) keep_cols.push_back(static_cast<int>(j));
    }
    // Artificials still basic (infeasible case) keep their rows intact; leave data as is.
    for (int b : basis_) {
      if (cols_[b].kind == Kind::artificial) return;
    }
    restrict_to(keep_rows, keep_cols);
  }

  void restrict_to(const std::vector<int>& keep_rows, const std::vector<int>& keep_cols) {
    const bool tableau_kept = T_.rows() == R_.rows() && T_.cols() == R_.cols() && beta_.size() == rhs_.size();
    std::vector<int> new_index(cols_.size(), -1);
    for (std::size_t k = 0; k < keep_cols.size(); ++k) new_index[keep_cols[k]] = static_cast<int>(k);
    RMatrix R(keep_rows.size(), keep_cols.size());
    RMatrix T(keep_rows.size(), keep_cols.size());
    RVector rhs(keep_rows.size()), beta(keep_rows.size());
    std::vector<Row> rows;
    std::vector<int> basis;
    std::vector<int> row_new(rows_.size(), -1);
    for (std::size_t i = 0; i < keep_rows.size(); ++i) row_new[keep_rows[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < keep_rows.size(); ++i) {
      const int r = keep_rows[i];
      for (std::size_t k = 0; k < keep_cols.size(); ++k) {
        R(i, k) = R_(r, keep_cols[k]);
        if (T_.rows() == R_.rows() && T_.cols() == R_.cols()) T(i, k) = T_(r, keep_cols[k]);
      }
      rhs(i) = rhs_(r);
      beta(i) = beta_.size() == rhs_.size() ? beta_(r) : 0.0;
      Row row = rows_[r];
      if (row.slack >= 0) row.slack = new_index[row.slack];
      rows.push_back(row);
      if (!basis_.empty()) basis.push_back(new_index[basis_[r]]);
    }
    std::vector<Col> cols;
    RVector cost(keep_cols.size());
    for (std::size_t k = 0; k < keep_cols.size(); ++k) {
      Col c = cols_[keep_cols[k]];
      if (c.row >= 0) c.row = row_new[c.row];
      cols.push_back(c);
      cost(k) = cost_.size() == static_cast<Eigen::Index>(cols_.size()) ? cost_(keep_cols[k]) : c.cost;
    }
    for (int& p : pos_) p = new_index[p];
    for (int& q : neg_) {
      if (q >= 0) q = new_index[q];
    }
    R_ = std::move(R);
    T_ = std::move(T);
    rhs_ = std::move(rhs);
    beta_ = std::move(beta);
    rows_ = std::move(rows);
    cols_ = std::move(cols);
    basis_ = std::move(basis);
    cost_ = std::move(cost);
    // Dropped rows had their own slack basic, so the kept tableau rows stay valid.
    if (!basis_.empty() && !tableau_kept) refactor();
    else if (cost_.size() == static_cast<Eigen::Index>(cols_.size())) recompute_reduced_costs();
  }

  LPSolution finish(LPStatus status) {
    LPSolution out;
    out.status = status;
    out.iterations = total_pivots_;
    RVector v = RVector::Zero(cols_.size());
    for (std::size_t r = 0; r < basis_.size(); ++r) v(basis_[r]) = beta_(r);
    out.x = RVector(n_);
    for (int j = 0; j < n_; ++j) out.x(j) = v(pos_[j]) - (neg_[j] >= 0 ? v(neg_[j]) : 0.0);
    if (status != LPStatus::optimal) return out;
    const RVector c = costs();
    out.objective = c.dot(v);
    RVector y;
    if (num_eq_ == 0 && cost_.size() == c.size() && !rows_.empty()) {
      // Slack columns have zero cost, so their reduced costs are -y.
      recompute_reduced_costs();
      y.resize(rows_.size());
      for (std::size_t r = 0; r < rows_.size(); ++r) y(r) = -d_(rows_[r].slack);
    } else {
      y = duals_for(c);
    }
    out.eq_duals = RVector::Zero(num_eq_);
    out.ineq_duals = RVector::Zero(next_le_id_);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (rows_[r].eq) out.eq_duals(rows_[r].id) = y(r);
      else out.ineq_duals(rows_[r].id) = std::max(-y(r), 0.0);
    }
    return out;
  }

  SimplexOptions opt_;
  int n_ = 0;
  int num_eq_ = 0;
  int next_le_id_ = 0;
  int pivots_ = 0;
  int total_pivots_ = 0;
  int since_refactor_ = 0;
  std::vector<int> pos_, neg_;
  std::vector<Col> cols_;
  std::vector<Row> rows_;
  std::vector<int> redundant_eq_;
  RMatrix R_;      // constraint data over standard-form columns
  RVector rhs_;
  RMatrix T_;      // B^{-1} R
  RVector beta_;   // B^{-1} rhs
  RVector cost_;
  RVector d_;      // reduced costs
  std::vector<int> basis_;
};

/// One-shot solve.
inline LPSolution simplex_solve(const LinearProgram& lp, SimplexOptions opt = {}) {
  Simplex s(lp, opt);
  return s.solve();
}

}  // namespace qgauge
