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

// Conditional-gradient ascent of a concave function over the probability simplex,
// with pairwise (toward/away) steps and a derivative-bisection line search.

#include <cmath>
#include <functional>
#include <limits>

#include "qgauge/linalg.hpp"
#include "qgauge/solvers/admm.hpp"

namespace qgauge {

struct FrankWolfeOptions {
  double tol = 1e-9;  // stop when the FW gap is below this
  int max_iter = 5000;
};

struct FrankWolfeResult {
  SolveStatus status = SolveStatus::max_iterations;
  RVector x;
  double value = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();  // value <= max <= value + gap
  int iterations = 0;
};

/// Maximizes concave f over {x >= 0, sum x = 1} of dimension x0.size().
inline FrankWolfeResult frank_wolfe_maximize(const std::function<double(const RVector&)>& f,
                                             const std::function<RVector(const RVector&)>& grad, RVector x0,
                                             FrankWolfeOptions opt = {}) {
  FrankWolfeResult res;
  const auto n = x0.size();
  if (n == 0) throw std::invalid_argument("frank_wolfe_maximize: empty simplex");
  RVector x = std::move(x0);
  double fx = f(x);
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    const RVector g = grad(x);
    if (!g.allFinite()) throw std::runtime_error("frank_wolfe_maximize: non-finite gradient");
    Eigen::Index s = 0;
    g.maxCoeff(&s);
    res.gap = g(s) - g.dot(x);
    if (res.gap <= opt.tol) {
      res.status = SolveStatus::converged;
      break;
    }
    // Away vertex: worst gradient among the support.
    Eigen::Index a = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (x(i) > 0.0 && (a < 0 || g(i) < g(a))) a = i;
    }
    RVector dir;
    double hi = 1.0;
    if (a >= 0 && a != s && g(s) - g(a) > res.gap) {
      dir = RVector::Zero(n);
      dir(s) = 1.0;
      dir(a) = -1.0;
      hi = x(a);
    } else {
      dir = -x;
      dir(s) += 1.0;
    }
    // Concave along dir: bisect on the sign of the directional derivative, which
    // stays resolvable after function values have stopped changing.
    auto slope = [&](double t) { return grad(RVector(x + t * dir)).dot(dir); };
    double step = hi;
    if (slope(hi) < 0.0) {
      double lo = 0.0, up = hi;
      for (int k = 0; k < 60; ++k) {
        const double mid = 0.5 * (lo + up);
        (slope(mid) > 0.0 ? lo : up) = mid;
      }
      step = 0.5 * (lo + up);
    }
    RVector next = x + step * dir;
    if (hi < 1.0 && step >= hi * (1.0 - 1e-12)) next(a) = 0.0;  // drop step
    for (Eigen::Index i = 0; i < n; ++i) {
      if (next(i) < 1e-14) next(i) = 0.0;
    }
    next /= next.sum();
    const double fn = f(next);
    if (fn < fx - 1e-15) {
      // Line search noise; fall back to the classic short step.
      next = x + (2.0 / (it + 2.0)) * (RVector::Unit(n, s) - x);
    }
    x = next;
    fx = f(x);
  }
  res.iterations = it;
  res.x = x;
  res.value = fx;
  return res;
}

}  // namespace qgauge
