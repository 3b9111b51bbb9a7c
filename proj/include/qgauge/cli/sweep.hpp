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

// Measure curves along a line of states rho(a) = (1 - a) rho0 + a rho1.

#include <algorithm>
#include <atomic>
#include <functional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qgauge/cli/state_io.hpp"
#include "qgauge/measures.hpp"
#include "qgauge/stabilizer.hpp"

namespace qgauge::cli {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Results are written by index,
/// so the output does not depend on the worker count. The first exception is rethrown.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

inline const std::vector<std::string>& default_sweep_measures() {
  static const std::vector<std::string> m = {"standard_robustness",     "generalized_robustness",
                                             "random_robustness",       "best_free_approximation",
                                             "modified_trace_distance", "nuclear_gauge",
                                             "geometric_measure"};
  return m;
}

struct SweepSpec {
  std::string family;  // "magic_T_mix" or "custom_line"
  int n = 1;
  std::optional<DensityMatrix> rho0, rho1;
  std::vector<double> grid;
  std::vector<std::string> measures;
};

/// n + 1 evenly spaced points 0, 1/n, ..., 1 (points >= 2).
inline std::vector<double> uniform_grid(int points) {
  if (points < 2) throw ParseError("sweep: need at least 2 grid points");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = static_cast<double>(i) / (points - 1);
  return g;
}

inline void validate(const SweepSpec& spec) {
  if (spec.grid.empty()) throw ParseError("sweep: empty grid");
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    const double a = spec.grid[i];
    if (!(a >= 0.0 && a <= 1.0)) throw ParseError("sweep: grid values must lie in [0, 1]");
    if (i > 0 && !(a > spec.grid[i - 1])) throw ParseError("sweep: grid must be strictly increasing");
  }
  if (spec.measures.empty()) throw ParseError("sweep: no measures");
  for (const auto& m : spec.measures) {
    if (std::find(measure_names().begin(), measure_names().end(), m) == measure_names().end()) {
      throw ParseError("sweep: unknown measure '" + m + "'");
    }
  }
  if (spec.family == "custom_line") {
    if (!spec.rho0 || !spec.rho1) throw ParseError("sweep: custom_line needs both endpoint states");
    if (spec.rho0->dims() != spec.rho1->dims()) throw ParseError("sweep: endpoint dimensions differ");
  } else if (spec.family != "magic_T_mix") {
    throw ParseError("sweep: unknown family '" + spec.family + "'");
  }
}

/// Accepts "magic_T_mix(n)", "magic_T_mix" (n = 1) and "custom_line".
inline SweepSpec parse_family(const std::string& text) {
  SweepSpec spec;
  static const std::regex mix(R"(\s*magic_T_mix\s*(?:\(\s*([0-9]+)\s*\))?\s*)");
  static const std::regex line(R"(\s*custom_line\s*(?:\(\s*\))?\s*)");
  std::smatch m;
  if (std::regex_match(text, m, mix)) {
    spec.family = "magic_T_mix";
    if (m[1].matched) spec.n = std::stoi(m[1].str());
    if (spec.n < 1 || spec.n > 3) throw ParseError("sweep: magic_T_mix needs n in 1..3");
    return spec;
  }
  if (std::regex_match(text, line)) {
    spec.family = "custom_line";
    return spec;
  }
  throw ParseError("sweep: unknown family '" + text + "'");
}

struct SweepTable {
  std::vector<std::string> measures;
  std::vector<double> alpha;
  std::vector<std::vector<MeasureResult>> rows;  // rows[i][j]: measure j at alpha i
};

inline TheoryDescriptor sweep_theory(const SweepSpec& spec, const std::optional<TheoryDescriptor>& given) {
  if (spec.family == "magic_T_mix") {
    const TheoryDescriptor th = TheoryDescriptor::magic(spec.n);
    if (given && !(*given == th)) throw ParseError("sweep: magic_T_mix runs under magic:n=" + std::to_string(spec.n));
    return th;
  }
  if (!given) throw ParseError("sweep: custom_line needs a theory");
  return *given;
}

inline SweepTable run_sweep(const SweepSpec& spec, const TheoryDescriptor& th, const MeasureOptions& opt,
                            int threads = 1) {
  validate(spec);
  const bool t_mix = spec.family == "magic_T_mix";
  const DensityMatrix rho0 = t_mix ? DensityMatrix::maximally_mixed(th.state_dims()) : *spec.rho0;
  const DensityMatrix rho1 = t_mix ? DensityMatrix(t_state(spec.n)) : *spec.rho1;
  if (rho0.dim() != th.dim()) throw ParseError("sweep: state dimension does not match theory");
  SweepTable table;
  table.measures = spec.measures;
  table.alpha = spec.grid;
  table.rows.assign(spec.grid.size(), std::vector<MeasureResult>(spec.measures.size()));
  const int cells = static_cast<int>(spec.grid.size() * spec.measures.size());
  parallel_for(cells, threads, [&](int c) {
    const std::size_t i = c / spec.measures.size(), j = c % spec.measures.size();
    const DensityMatrix rho = mix(rho0, rho1, spec.grid[i]);
    MeasureResult r;
    try {
      r = evaluate_measure(spec.measures[j], rho, th, opt);
    } catch (const UnsupportedError&) {
      r.name = spec.measures[j];
      r.status = MeasureStatus::failed;
      r.stats.method = "unsupported";
    }
    table.rows[i][j] = std::move(r);
  });
  return table;
}

/// CSV with header "alpha,<measure>...". Unsupported cells are "nan".
inline std::string format_sweep_csv(const SweepTable& t) {
  std::ostringstream os;
  os << "alpha";
  for (const auto& m : t.measures) os << ',' << m;
  os << '\n';
  for (std::size_t i = 0; i < t.alpha.size(); ++i) {
    os << format_number(t.alpha[i]);
    for (const auto& r : t.rows[i]) os << ',' << format_number(r.value);
    os << '\n';
  }
  return os.str();
}

}  // namespace qgauge::cli
