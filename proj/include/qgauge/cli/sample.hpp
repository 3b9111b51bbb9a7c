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

// Gauge statistics over random pure states.

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qgauge/cli/state_io.hpp"
#include "qgauge/cli/sweep.hpp"
#include "qgauge/gauges.hpp"
#include "qgauge/stabilizer.hpp"
#include "qgauge/theory.hpp"

namespace qgauge::cli {

enum class SampleFamily { haar, free };

inline SampleFamily parse_sample_family(const std::string& s) {
  if (s == "haar") return SampleFamily::haar;
  if (s == "free" || s == "product") return SampleFamily::free;
  throw ParseError("sample: unknown family '" + s + "' (haar, free, product)");
}

/// Scale that maps Gamma^2 - 1 onto [0, 1]: k / (d - k) for k-coherence and
/// Schmidt number k (d the local dimension), 1 elsewhere.
inline double normalization(const TheoryDescriptor& th) {
  if (th.kind == TheoryKind::coherence && th.d > th.k) return static_cast<double>(th.k) / (th.d - th.k);
  if (th.kind == TheoryKind::schmidt) {
    const int d = std::min(th.da, th.db);
    if (d > th.k) return static_cast<double>(th.k) / (d - th.k);
  }
  return 1.0;
}

/// A random free pure state: k-sparse, Schmidt rank k, biseparable, or a stabilizer state.
inline StateVector sample_free(const TheoryDescriptor& th, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  switch (th.kind) {
    case TheoryKind::coherence: {
      const StateVector v = sample_pure({th.k}, seed);
      std::vector<int> idx(th.d);
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      CVector out = CVector::Zero(th.d);
      for (int i = 0; i < th.k; ++i) out(idx[i]) = v.amplitudes()(i);
      return StateVector({th.d}, out);
    }
    case TheoryKind::schmidt: {
      // Random isometries from a Haar state on (k x dA) and (k x dB) blocks.
      const StateVector a = sample_pure({th.k, th.da}, seed);
      const StateVector b = sample_pure({th.k, th.db}, seed + 0x9e3779b97f4a7c15ULL);
      const StateVector lam = sample_pure({th.k}, seed + 0x3c6ef372fe94f82bULL);
      CVector out = CVector::Zero(th.da * th.db);
      for (int i = 0; i < th.k; ++i) {
        const CVector ai = a.amplitudes().segment(i * th.da, th.da).normalized();
        const CVector bi = b.amplitudes().segment(i * th.db, th.db).normalized();
        out += lam.amplitudes()(i) * kron(ai, bi);
      }
      return StateVector::normalized({th.da, th.db}, out);
    }
    case TheoryKind::genuine: {
      const int rest = product(th.parties) / th.parties[0];
      const StateVector a = sample_pure({th.parties[0]}, seed);
      const StateVector b = sample_pure({rest}, seed + 0x9e3779b97f4a7c15ULL);
      return StateVector(th.parties, kron(a.amplitudes(), b.amplitudes()), 1e-10);
    }
    case TheoryKind::magic: {
      const auto& states = stabilizer_set(th.n).states;
      std::uniform_int_distribution<std::size_t> pick(0, states.size() - 1);
      return states[pick(rng)];
    }
  }
  throw UnsupportedError("sample: unknown theory");
}

struct SampleRow {
  double gauge = 0.0;       // Gamma_V(psi)
  double excess = 0.0;      // Gamma_V(psi)^2 - 1
  double normalized = 0.0;  // excess scaled into [0, 1]
  double dual = 0.0;        // polar gauge of psi: largest free overlap, square-rooted
  double geometric = 0.0;   // 1 - dual^2
};

inline std::vector<SampleRow> run_sample(const TheoryDescriptor& th, int count, std::uint64_t seed,
                                         SampleFamily family = SampleFamily::haar, int threads = 1) {
  if (count < 1) throw ParseError("sample: count must be positive");
  std::vector<SampleRow> rows(count);
  const double scale = normalization(th);
  parallel_for(count, threads, [&](int i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    const StateVector psi = family == SampleFamily::haar ? sample_pure(th.state_dims(), s) : sample_free(th, s);
    SampleRow r;
    r.gauge = pure_gauge(psi, th);
    r.excess = std::max(0.0, r.gauge * r.gauge - 1.0);
    if (r.excess < 1e-10) r.excess = 0.0;
    r.normalized = r.excess * scale;
    const double p = pure_polar(psi, th);
    r.dual = std::sqrt(p);
    r.geometric = std::clamp(1.0 - p, 0.0, 1.0);
    if (r.geometric < 1e-12) r.geometric = 0.0;
    rows[i] = r;
  });
  return rows;
}

inline std::string format_sample_csv(const std::vector<SampleRow>& rows) {
  std::ostringstream os;
  os << "index,gauge,gauge_sq_minus_1,normalized,dual_gauge,geometric\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << i << ',' << format_number(r.gauge) << ',' << format_number(r.excess) << ',' << format_number(r.normalized)
       << ',' << format_number(r.dual) << ',' << format_number(r.geometric) << '\n';
  }
  return os.str();
}

}  // namespace qgauge::cli
