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

#include <array>
#include <deque>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "qgauge/linalg.hpp"

namespace qgauge {

/// Divides out the phase of the first amplitude with magnitude above `cut`.
inline CVector canonical_phase(const CVector& v, double cut = 1e-9) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > cut) return v * (std::conj(v(i)) / a);
  }
  return v;
}

/// Equality of rays: |<a|b>| > 1 - tol.
inline bool same_ray(const CVector& a, const CVector& b, double tol = 1e-10) {
  return std::abs(a.dot(b)) > 1.0 - tol;
}

namespace clifford {

// Qubit 0 is the most significant bit of the amplitude index.
inline int bit(int index, int q, int n) { return (index >> (n - 1 - q)) & 1; }

inline CVector hadamard(const CVector& v, int q, int n) {
  const double s = 1.0 / std::sqrt(2.0);
  CVector out(v.size());
  const int mask = 1 << (n - 1 - q);
  for (int i = 0; i < v.size(); ++i) {
    const int i0 = i & ~mask, i1 = i | mask;
    out(i) = bit(i, q, n) ? s * (v(i0) - v(i1)) : s * (v(i0) + v(i1));
  }
  return out;
}

inline CVector phase(const CVector& v, int q, int n) {
  CVector out = v;
  for (int i = 0; i < v.size(); ++i) {
    if (bit(i, q, n)) out(i) *= cplx(0.0, 1.0);
  }
  return out;
}

inline CVector cnot(const CVector& v, int control, int target, int n) {
  CVector out(v.size());
  const int tmask = 1 << (n - 1 - target);
  for (int i = 0; i < v.size(); ++i) out(i) = bit(i, control, n) ? v(i ^ tmask) : v(i);
  return out;
}

/// All generator images of v: H_q, S_q for each qubit, CNOT for each ordered pair.
inline std::vector<CVector> neighbours(const CVector& v, int n) {
  std::vector<CVector> out;
  for (int q = 0; q < n; ++q) {
    out.push_back(hadamard(v, q, n));
    out.push_back(phase(v, q, n));
  }
  for (int c = 0; c < n; ++c) {
    for (int t = 0; t < n; ++t) {
      if (c != t) out.push_back(cnot(v, c, t, n));
    }
  }
  return out;
}

}  // namespace clifford

/// Pure stabilizer states on n qubits, by breadth-first Clifford closure of |0...0>.
/// Output order is the BFS discovery order; every vector carries canonical phase.
inline std::vector<StateVector> stabilizer_enumerate(int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("stabilizer_enumerate: n must be 1, 2 or 3");
  const int d = 1 << n;
  std::vector<CVector> found;
  std::deque<int> queue;
  CVector zero = CVector::Zero(d);
  zero(0) = 1.0;
  found.push_back(zero);
  queue.push_back(0);
  while (!queue.empty()) {
    const CVector current = found[queue.front()];
    queue.pop_front();
    for (const CVector& next : clifford::neighbours(current, n)) {
      const CVector c = canonical_phase(next);
      bool seen = false;
      for (const CVector& f : found) {
        if (same_ray(f, c)) {
          seen = true;
          break;
        }
      }
      if (!seen) {
        found.push_back(c);
        queue.push_back(static_cast<int>(found.size()) - 1);
      }
    }
  }
  std::vector<StateVector> out;
  out.reserve(found.size());
  for (const CVector& v : found) out.emplace_back(Dims(n, 2), v, 1e-10);
  return out;
}

/// Enumerated states plus the dictionary matrix whose columns are the states.
struct StabilizerSet {
  std::vector<StateVector> states;
  CMatrix dictionary;  // 2^n x N
};

/// Process-wide cache; enumeration runs once per n.
inline const StabilizerSet& stabilizer_set(int n) {
  static std::mutex mu;
  static std::array<std::unique_ptr<StabilizerSet>, 4> cache;
  if (n < 1 || n > 3) throw std::invalid_argument("stabilizer_set: n must be 1, 2 or 3");
  std::lock_guard<std::mutex> lock(mu);
  if (!cache[n]) {
    auto set = std::make_unique<StabilizerSet>();
    set->states = stabilizer_enumerate(n);
    set->dictionary.resize(1 << n, static_cast<Eigen::Index>(set->states.size()));
    for (std::size_t i = 0; i < set->states.size(); ++i) set->dictionary.col(i) = set->states[i].amplitudes();
    cache[n] = std::move(set);
  }
  return *cache[n];
}

/// The single-qubit magic state cos(t/2)|0> + e^{i pi/4} sin(t/2)|1> with cos t = 1/sqrt(3),
/// and its n-fold tensor power.
inline StateVector t_state(int n = 1) {
  if (n < 1 || n > 3) throw std::invalid_argument("t_state: n must be in 1..3");
  const double t = std::acos(1.0 / std::sqrt(3.0));
  const double pi = std::acos(-1.0);
  CVector one(2);
  one << std::cos(t / 2), std::polar(1.0, pi / 4) * std::sin(t / 2);
  CVector v = one;
  for (int q = 1; q < n; ++q) v = kron(v, one);
  return StateVector(Dims(n, 2), v, 1e-12);
}

}  // namespace qgauge
