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

// Upper bounds on convex roofs by descent over pure-state ensembles.
//
// An ensemble of rho with m members is the column set of X = E U^H, where
// E = [sqrt(l_1) e_1 ... sqrt(l_r) e_r] and U is an m x r isometry. Right
// multiplication of X by a 2x2 unitary on a column pair keeps X X^H = rho, so
// coordinate descent runs over such rotations.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "qgauge/linalg.hpp"
#include "qgauge/solvers/frank_wolfe.hpp"

namespace qgauge {

/// g evaluated on a normalized pure state.
using PureObjective = std::function<double(const CVector&)>;

struct EnsembleOptions {
  int members = 0;      // 0: min(r^2, 2r + 2)
  int restarts = 32;
  std::uint64_t seed = 1;
  int max_sweeps = 40;
  int grid = 12;        // coarse angle grid before golden refinement
  double rel_tol = 1e-9;
  double floor = -std::numeric_limits<double>::infinity();  // known lower bound: stop once reached
  double floor_tol = 1e-12;
  std::vector<CMatrix> seed_ensembles;  // columns: unnormalized members summing to rho
};

struct EnsembleResult {
  double value = std::numeric_limits<double>::infinity();
  CMatrix members;  // d x m, columns x_i with sum x_i x_i^H = rho
  int best_restart = -1;
  double reconstruction_error = 0.0;
};

namespace detail {

// p g(x / |x|) with p = |x|^2; zero members contribute nothing.
inline double weighted(const PureObjective& g, const CVector& x) {
  const double p = x.squaredNorm();
  if (p < 1e-300) return 0.0;
  return p * g(x / std::sqrt(p));
}

inline CMatrix random_isometry(int m, int r, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix a(m, r);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < r; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(i, j) = cplx(re, im);
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ() * CMatrix::Identity(m, r);
}

// Columns (a, b) <- (a, b) V with V = [[c, -s e^{-i phi}], [s e^{i phi}, c]].
inline void rotate(CMatrix& x, int a, int b, double theta, double phi) {
  const double c = std::cos(theta), s = std::sin(theta);
  const cplx e = std::polar(1.0, phi);
  const CVector xa = x.col(a), xb = x.col(b);
  x.col(a) = c * xa + s * e * xb;
  x.col(b) = -s * std::conj(e) * xa + c * xb;
}

inline double descend(CMatrix& x, const PureObjective& g, const EnsembleOptions& opt) {
  const int m = static_cast<int>(x.cols());
  std::vector<double> vals(m);
  for (int i = 0; i < m; ++i) vals[i] = weighted(g, x.col(i));
  double total = 0.0;
  for (double v : vals) total += v;
  const double pi = std::acos(-1.0);
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    const double before = total;
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b) {
        for (double phi : {0.0, pi / 2}) {
          const CVector xa = x.col(a), xb = x.col(b);
          auto pair_value = [&](double theta) {
            const double c = std::cos(theta), s = std::sin(theta);
            const cplx e = std::polar(1.0, phi);
            return weighted(g, c * xa + s * e * xb) + weighted(g, -s * std::conj(e) * xa + c * xb);
          };
          const double current = vals[a] + vals[b];
          double best_t = 0.0, best_v = current;
          const double h = pi / opt.grid;
          for (int k = 1; k < opt.grid; ++k) {
            const double t = -pi / 2 + k * h;
            const double v = pair_value(t);
            if (v < best_v) {
              best_v = v;
              best_t = t;
            }
          }
          // Golden refinement around the best grid point.
          double lo = best_t - h, hi = best_t + h;
          const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
          double c1 = hi - gr * (hi - lo), c2 = lo + gr * (hi - lo);
          double f1 = pair_value(c1), f2 = pair_value(c2);
          for (int it = 0; it < 28; ++it) {
            if (f1 <= f2) {
              hi = c2;
              c2 = c1;
              f2 = f1;
              c1 = hi - gr * (hi - lo);
              f1 = pair_value(c1);
            } else {
              lo = c1;
              c1 = c2;
              f1 = f2;
              c2 = lo + gr * (hi - lo);
              f2 = pair_value(c2);
            }
          }
          const double t = f1 <= f2 ? c1 : c2;
          const double v = std::min(f1, f2);
          if (v < best_v) {
            best_v = v;
            best_t = t;
          }
          if (best_v < current - 1e-15 * (1.0 + std::abs(current))) {
            rotate(x, a, b, best_t, phi);
            vals[a] = weighted(g, x.col(a));
            vals[b] = weighted(g, x.col(b));
            total += vals[a] + vals[b] - current;
          }
        }
      }
    }
    if (before - total <= opt.rel_tol * (1.0 + std::abs(total))) break;
  }
  total = 0.0;
  for (int i = 0; i < m; ++i) total += weighted(g, x.col(i));
  return total;
}

}  // namespace detail

/// Best (smallest) ensemble average of g found over seeds and random restarts.
inline EnsembleResult ensemble_optimize(const CMatrix& rho, const PureObjective& g, EnsembleOptions opt = {}) {
  EnsembleResult res;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()));
  const RVector lam = es.eigenvalues();
  const double lmax = lam.cwiseAbs().maxCoeff();
  std::vector<int> keep;
  for (Eigen::Index i = lam.size() - 1; i >= 0; --i) {
    if (lam(i) > 1e-12 * std::max(1.0, lmax)) keep.push_back(static_cast<int>(i));
  }
  const int r = static_cast<int>(keep.size());
  if (r == 0) throw std::invalid_argument("ensemble_optimize: zero matrix");
  CMatrix e(rho.rows(), r);
  for (int j = 0; j < r; ++j) e.col(j) = std::sqrt(lam(keep[j])) * es.eigenvectors().col(keep[j]);
  if (r == 1) {
    res.members = e;
    res.value = detail::weighted(g, e.col(0));
    res.best_restart = 0;
    return res;
  }
  const int m = opt.members > 0 ? std::max(opt.members, r) : std::min(r * r, 2 * r + 2);
  auto consider = [&](CMatrix x, int index) {
    const double v = detail::descend(x, g, opt);
    if (v < res.value) {
      res.value = v;
      res.members = x;
      res.best_restart = index;
    }
  };
  int index = 0;
  for (const CMatrix& s : opt.seed_ensembles) {
    if (s.rows() != rho.rows()) throw std::invalid_argument("ensemble_optimize: seed dimension mismatch");
    CMatrix x = CMatrix::Zero(rho.rows(), std::max<Eigen::Index>(s.cols(), m));
    x.leftCols(s.cols()) = s;
    consider(std::move(x), index++);
  }
  for (int k = 0; k < opt.restarts; ++k) {
    if (res.value <= opt.floor + opt.floor_tol * (1.0 + std::abs(opt.floor))) break;
    std::mt19937_64 rng(opt.seed + static_cast<std::uint64_t>(k));
    const CMatrix u = detail::random_isometry(m, r, rng);
    consider(CMatrix(e * u.adjoint()), index++);
  }
  res.reconstruction_error = max_abs(res.members * res.members.adjoint() - rho);
  return res;
}

}  // namespace qgauge
