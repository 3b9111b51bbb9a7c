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

// Complex basis pursuit  min ||x||_1  s.t.  A x = b  by scaled ADMM.
// The affine projection uses a rank-revealing pseudoinverse of A A^H, and each
// run is certified by a primal value and a dual bound from the ADMM multiplier.
// Every polish_every iterations both bounds are sharpened by solving the problem
// restricted to a candidate support.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "qgauge/linalg.hpp"

namespace qgauge {

/// Dense map x -> A x.
class DenseMap {
 public:
  explicit DenseMap(CMatrix a) : a_(std::move(a)) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(CMatrix(a_ * a_.adjoint()));
    q_ = es.eigenvectors();
    inv_ = es.eigenvalues();
    const double cut = 1e-12 * std::max(1.0, inv_.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < inv_.size(); ++i) inv_(i) = inv_(i) > cut ? 1.0 / inv_(i) : 0.0;
  }

  Eigen::Index rows() const { return a_.rows(); }
  Eigen::Index cols() const { return a_.cols(); }
  CVector apply(const CVector& x) const { return a_ * x; }
  CVector adjoint(const CVector& y) const { return a_.adjoint() * y; }
  CVector gram(const CVector& y) const { return a_ * (a_.adjoint() * y); }
  CVector gram_pinv(const CVector& y) const { return q_ * (inv_.asDiagonal() * (q_.adjoint() * y)); }

 private:
  CMatrix a_;
  CMatrix q_;
  RVector inv_;
};

/// Matrix map X -> T X T^H on column-major vectorizations (N x N to d x d).
class SandwichMap {
 public:
  explicit SandwichMap(CMatrix t) : t_(std::move(t)) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(CMatrix(t_ * t_.adjoint()));
    q_ = es.eigenvectors();
    const RVector lam = es.eigenvalues();
    const double cut = 1e-12 * std::max(1.0, lam.cwiseAbs().maxCoeff());
    const auto d = lam.size();
    inv_ = RMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        if (lam(i) > cut && lam(j) > cut) inv_(i, j) = 1.0 / (lam(i) * lam(j));
      }
    }
  }

  Eigen::Index rows() const { return t_.rows() * t_.rows(); }
  Eigen::Index cols() const { return t_.cols() * t_.cols(); }

  CVector apply(const CVector& x) const {
    const auto n = t_.cols();
    Eigen::Map<const CMatrix> X(x.data(), n, n);
    CMatrix out = t_ * X * t_.adjoint();
    return Eigen::Map<const CVector>(out.data(), out.size());
  }

  CVector adjoint(const CVector& y) const {
    const auto d = t_.rows();
    Eigen::Map<const CMatrix> Y(y.data(), d, d);
    CMatrix out = t_.adjoint() * Y * t_;
    return Eigen::Map<const CVector>(out.data(), out.size());
  }

  CVector gram(const CVector& y) const { return apply(adjoint(y)); }

  CVector gram_pinv(const CVector& y) const {
    const auto d = t_.rows();
    Eigen::Map<const CMatrix> Y(y.data(), d, d);
    CMatrix z = q_.adjoint() * Y * q_;
    z = z.cwiseProduct(inv_.cast<cplx>());
    CMatrix out = q_ * z * q_.adjoint();
    return Eigen::Map<const CVector>(out.data(), out.size());
  }

 private:
  CMatrix t_;
  CMatrix q_;
  RMatrix inv_;
};

/// `stalled`: no further progress possible at the configured resolution (e.g. every
/// new cut duplicates an existing one); bounds are still reported.
enum class SolveStatus { converged, infeasible, max_iterations, stalled };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::stalled: return "stalled";
  }
  return "?";
}

struct AdmmOptions {
  double tol = 1e-8;      // relative gap: upper - lower <= tol (1 + upper)
  int max_iter = 50000;
  int check_every = 10;
  double rho = 1.0;
  int adapt_until = 1000;
  int polish_every = 500;  // iterations between support polishes (0: never)
};

struct L1Result {
  SolveStatus status = SolveStatus::max_iterations;
  CVector x;          // feasible point attaining `value`
  double value = std::numeric_limits<double>::infinity();  // ||x||_1, an upper bound
  double lower = 0.0;  // certified dual bound Re<y, b>
  CVector y;           // dual vector with ||A^H y||_inf <= 1
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;

  double gap() const { return value - lower; }
};

namespace detail {

inline double l1(const CVector& v) { return v.cwiseAbs().sum(); }

inline CVector soft_threshold(const CVector& w, double tau) {
  CVector out(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double a = std::abs(w(i));
    out(i) = a > tau ? w(i) * ((a - tau) / a) : cplx(0.0);
  }
  return out;
}

struct Polish {
  std::optional<CVector> x;  // feasible, supported on the chosen set
  double lower = 0.0;
  CVector y;                 // ||A^H y||_inf <= 1
};

// Basis pursuit restricted to the columns in `support`, solved by iteratively
// reweighted least squares x = W A_S^H (A_S W A_S^H)^{-1} b with W = diag|x|. At
// the fixed point (A_S^H lambda)_j is the phase of x_j, so lambda rescaled into the
// dual ball certifies the result whenever the support is the optimal one.
template <class Map>
Polish irls_polish(const Map& op, const CVector& b, const std::vector<Eigen::Index>& support, const CVector& start,
                   int iterations = 100) {
  Polish out;
  const auto m = b.size();
  const auto n = static_cast<Eigen::Index>(support.size());
  if (n == 0) return out;
  CMatrix as(m, n);
  RVector w(n);
  for (Eigen::Index q = 0; q < n; ++q) {
    as.col(q) = op.apply(CVector::Unit(op.cols(), support[q]));
    w(q) = std::abs(start(support[q]));
  }
  if (!(w.maxCoeff() > 0.0)) w.setOnes();
  CVector xs, lam;
  for (int it = 0; it < iterations; ++it) {
    w = w.cwiseMax(1e-14 * w.maxCoeff());
    const CMatrix gram = as * w.cast<cplx>().asDiagonal() * as.adjoint();
    lam = gram.completeOrthogonalDecomposition().solve(b);
    xs = w.cast<cplx>().asDiagonal() * (as.adjoint() * lam);
    const RVector next = xs.cwiseAbs();
    const double change = (next - w).cwiseAbs().maxCoeff();
    w = next;
    if (change <= 1e-15 * (1.0 + w.maxCoeff())) break;
  }
  if (!xs.allFinite() || (as * xs - b).norm() > 1e-10 * (1.0 + b.norm())) return out;
  CVector x = CVector::Zero(op.cols());
  for (Eigen::Index q = 0; q < n; ++q) x(support[q]) = xs(q);
  out.x = x;
  const double vinf = op.adjoint(lam).cwiseAbs().maxCoeff();
  if (vinf > 0.0) {
    out.y = lam / vinf;
    out.lower = lam.dot(b).real() / vinf;
  }
  return out;
}

}  // namespace detail

/// min ||x||_1 s.t. op.apply(x) = b.  `warm` may hold a previous solution.
template <class Map>
L1Result admm_l1_affine(const Map& op, const CVector& b, AdmmOptions opt = {},
                        const std::optional<CVector>& warm = std::nullopt) {
  L1Result res;
  if (b.size() != op.rows()) throw std::invalid_argument("admm_l1_affine: rhs length mismatch");
  const double bnorm = b.norm();
  const CVector y0 = op.gram_pinv(b);
  if ((op.gram(y0) - b).norm() > 1e-8 * (1.0 + bnorm)) {
    res.status = SolveStatus::infeasible;
    return res;
  }
  auto project = [&](const CVector& v) -> CVector { return v - op.adjoint(op.gram_pinv(op.apply(v) - b)); };

  CVector z = warm && warm->size() == op.cols() ? *warm : op.adjoint(y0);
  CVector u = CVector::Zero(op.cols());
  CVector x = z;
  double rho = opt.rho;
  double best_lower = 0.0;
  CVector best_y = CVector::Zero(b.size());
  {
    const CVector xf = project(z);
    res.x = xf;
    res.value = detail::l1(xf);
  }
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    x = project(z - u);
    const CVector z_old = z;
    z = detail::soft_threshold(x + u, 1.0 / rho);
    u += x - z;
    const double r = (x - z).norm();
    const double s = rho * (z - z_old).norm();
    res.primal_residual = r;
    res.dual_residual = s;
    if ((it + 1) % opt.check_every != 0) continue;
    // Penalty adaptation stops after adapt_until iterations so the tail runs at a fixed rho.
    if (it < opt.adapt_until) {
      if (r > 10.0 * s && rho < 1e6) {
        rho *= 2.0;
        u /= 2.0;
      } else if (s > 10.0 * r && rho > 1e-6) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
    // Primal certificates: feasible projection of z, and the support-kept correction.
    const CVector xf = project(z);
    const double upper = detail::l1(xf);
    if (upper < res.value) {
      res.value = upper;
      res.x = xf;
    }
    // Dual certificate: multiplier projected onto range(A^H), scaled into the dual ball.
    const CVector yb = op.gram_pinv(op.apply(rho * u));
    const CVector vr = op.adjoint(yb);
    const double vinf = vr.cwiseAbs().maxCoeff();
    if (vinf > 0.0) {
      const double lower = yb.dot(b).real() / vinf;
      if (lower > best_lower) {
        best_lower = lower;
        best_y = yb / vinf;
      }
    }
    if (opt.polish_every > 0 && (it + 1) % opt.polish_every == 0 &&
        res.value - best_lower > opt.tol * (1.0 + res.value)) {
      // Candidate supports: the sparse iterate, and the near-active set of the dual.
      std::vector<Eigen::Index> from_z, from_y;
      for (Eigen::Index j = 0; j < z.size(); ++j) {
        if (z(j) != cplx(0.0)) from_z.push_back(j);
      }
      const CVector v = op.adjoint(best_y);
      for (Eigen::Index j = 0; j < v.size(); ++j) {
        if (std::abs(v(j)) >= 1.0 - 1e-3) from_y.push_back(j);
      }
      for (const auto* sup : {&from_z, &from_y}) {
        const detail::Polish p = detail::irls_polish(op, b, *sup, z);
        if (p.x && detail::l1(*p.x) < res.value) {
          res.value = detail::l1(*p.x);
          res.x = *p.x;
        }
        if (p.lower > best_lower) {
          best_lower = p.lower;
          best_y = p.y;
        }
      }
    }
    if (res.value - best_lower <= opt.tol * (1.0 + res.value)) {
      res.status = SolveStatus::converged;
      ++it;
      break;
    }
  }
  res.iterations = it;
  res.lower = best_lower;
  res.y = best_y;
  return res;
}

}  // namespace qgauge
