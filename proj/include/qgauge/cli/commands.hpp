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

// Subcommand bodies. Each returns the process exit code:
// 0 success, 1 failed check or solver error, 2 unsupported, 3 parse error, 4 write failure.

#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qgauge/cli/check.hpp"
#include "qgauge/cli/sample.hpp"
#include "qgauge/cli/state_io.hpp"
#include "qgauge/cli/sweep.hpp"
#include "qgauge/measures.hpp"
#include "qgauge/stabilizer.hpp"
#include "qgauge/theory.hpp"

namespace qgauge::cli {

enum ExitCode { kOk = 0, kFailure = 1, kUnsupported = 2, kParseError = 3, kWriteError = 4 };

struct CommonFlags {
  double tol = MeasureOptions{}.tol;
  int max_iter = MeasureOptions{}.max_iter;
  int max_rounds = MeasureOptions{}.max_rounds;
  int restarts = MeasureOptions{}.restarts;
  std::uint64_t seed = 1;
  std::string format = "csv";    // csv | json
  std::string witness = "none";  // none | print | file
  std::string witness_file;
  std::string dictionary;        // vertex list overriding the theory's polytope
  std::string route = "auto";    // auto | closed_form | solver
  int threads = 1;
};

inline Route parse_route(const std::string& s) {
  if (s == "auto" || s == "automatic") return Route::automatic;
  if (s == "closed_form") return Route::closed_form;
  if (s == "solver") return Route::solver;
  throw ParseError("unknown route '" + s + "' (auto, closed_form, solver)");
}

inline MeasureOptions measure_options(const CommonFlags& f, const TheoryDescriptor& th) {
  if (!(f.tol > 0.0)) throw ParseError("--tol must be positive");
  if (f.max_iter < 1 || f.max_rounds < 1 || f.restarts < 0) throw ParseError("iteration limits must be positive");
  if (f.format != "csv" && f.format != "json") throw ParseError("--format must be csv or json");
  if (f.witness != "none" && f.witness != "print" && f.witness != "file") {
    throw ParseError("--witness must be none, print or file");
  }
  MeasureOptions o;
  o.tol = f.tol;
  o.max_iter = f.max_iter;
  o.max_rounds = f.max_rounds;
  o.restarts = f.restarts;
  o.seed = f.seed;
  o.route = parse_route(f.route);
  if (!f.dictionary.empty()) {
    o.dictionary = std::make_shared<const PolytopeFreeSet>(
        PolytopeFreeSet::from_states(th, load_states(f.dictionary, th.state_dims())));
  }
  return o;
}

/// Runs body(), translating exceptions to exit codes with a message on err.
template <class Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << '\n';
    return kUnsupported;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const WriteError& e) {
    err << "write error: " << e.what() << '\n';
    return kWriteError;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kParseError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

inline const char* record_columns() {
  return "measure,theory,value,status,lower,upper,gap,certified,direction,method,solver_status,iterations,rounds,cuts";
}

inline std::string format_record_csv(const MeasureResult& r, const TheoryDescriptor& th) {
  std::ostringstream os;
  const bool cert = r.status == MeasureStatus::ok;
  os << r.name << ',' << th.to_string() << ',' << format_number(r.value) << ',' << to_string(r.status) << ','
     << format_number(r.lower) << ',' << format_number(r.upper) << ',' << format_number(r.gap()) << ','
     << (cert ? "yes" : "no") << ',' << to_string(r.direction) << ',' << r.stats.method << ','
     << r.stats.solver_status << ',' << r.stats.iterations << ',' << r.stats.rounds << ',' << r.stats.cuts;
  return os.str();
}

inline json record_json(const MeasureResult& r, const TheoryDescriptor& th) {
  auto num = [](double v) -> json {
    if (std::isfinite(v)) return v;
    return format_number(v);
  };
  return {{"measure", r.name},
          {"theory", th.to_string()},
          {"value", num(r.value)},
          {"status", to_string(r.status)},
          {"lower", num(r.lower)},
          {"upper", num(r.upper)},
          {"gap", num(r.gap())},
          {"certified", r.status == MeasureStatus::ok},
          {"direction", to_string(r.direction)},
          {"method", r.stats.method},
          {"solver_status", r.stats.solver_status},
          {"iterations", r.stats.iterations},
          {"rounds", r.stats.rounds},
          {"cuts", r.stats.cuts}};
}

inline int cmd_measure(const std::string& state_path, const std::string& theory_text, const std::string& measure,
                       const CommonFlags& flags, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const TheoryDescriptor th = parse_theory(theory_text);
    const MeasureOptions opt = measure_options(flags, th);
    if (std::find(measure_names().begin(), measure_names().end(), measure) == measure_names().end()) {
      throw ParseError("unknown measure '" + measure + "'");
    }
    const LoadedState st = load_state(state_path);
    if (st.rho.dim() != th.dim()) {
      throw ParseError("state dimension " + std::to_string(st.rho.dim()) + " does not match " + th.to_string());
    }
    const MeasureResult r = evaluate_measure(measure, st.rho, th, opt);
    const bool print_w = flags.witness == "print" && r.witness;
    if (flags.format == "json") {
      json j = record_json(r, th);
      if (print_w) {
        j["witness"] = matrix_to_json(*r.witness);
        j["witness_kind"] = r.witness_kind;
      }
      out << j.dump(2) << '\n';
    } else {
      out << record_columns() << '\n' << format_record_csv(r, th) << '\n';
      if (print_w) {
        for (const char* part : {"re", "im"}) {
          out << "witness_" << part << '\n';
          for (Eigen::Index i = 0; i < r.witness->rows(); ++i) {
            for (Eigen::Index k = 0; k < r.witness->cols(); ++k) {
              const cplx z = (*r.witness)(i, k);
              out << (k ? "," : "") << format_number(part[0] == 'r' ? z.real() : z.imag());
            }
            out << '\n';
          }
        }
      }
    }
    if (flags.witness == "file") {
      if (flags.witness_file.empty()) throw ParseError("--witness file needs --witness-file");
      if (!r.witness) {
        err << "note: " << measure << " produced no witness\n";
      } else {
        json j = matrix_to_json(*r.witness);
        j["kind"] = r.witness_kind;
        save_json(flags.witness_file, j);
      }
    }
    if (r.status == MeasureStatus::uncertified) {
      err << "warning: bounds not certified (gap " << format_number(r.gap()) << ")\n";
    }
    if (r.status == MeasureStatus::failed) {
      err << "error: solver failed (" << r.stats.solver_status << ")\n";
      return static_cast<int>(kFailure);
    }
    return static_cast<int>(kOk);
  });
}

struct SweepArgs {
  std::string family = "magic_T_mix(1)";
  std::string theory;  // required for custom_line
  std::string rho0, rho1;
  int points = 21;
  std::vector<double> grid;  // overrides points when non-empty
  std::vector<std::string> measures;
  std::string output = "-";
};

inline int cmd_sweep(const SweepArgs& a, const CommonFlags& flags, std::ostream& err) {
  return guarded(err, [&] {
    SweepSpec spec = parse_family(a.family);
    std::optional<TheoryDescriptor> given;
    if (!a.theory.empty()) given = parse_theory(a.theory);
    const TheoryDescriptor th = sweep_theory(spec, given);
    const MeasureOptions opt = measure_options(flags, th);
    if (spec.family == "custom_line") {
      if (a.rho0.empty() || a.rho1.empty()) throw ParseError("custom_line needs --rho0 and --rho1");
      spec.rho0 = load_state(a.rho0).rho;
      spec.rho1 = load_state(a.rho1).rho;
    }
    spec.grid = a.grid.empty() ? uniform_grid(a.points) : a.grid;
    spec.measures = a.measures.empty() ? default_sweep_measures() : a.measures;
    const SweepTable t = run_sweep(spec, th, opt, flags.threads);
    for (std::size_t j = 0; j < t.measures.size(); ++j) {
      for (std::size_t i = 0; i < t.alpha.size(); ++i) {
        const auto& r = t.rows[i][j];
        if (r.stats.method == "unsupported") {
          err << "note: " << t.measures[j] << " unsupported for " << th.to_string() << "\n";
          break;
        }
        if (r.status == MeasureStatus::uncertified) {
          err << "warning: " << t.measures[j] << " at alpha=" << format_number(t.alpha[i]) << " not certified\n";
        }
      }
    }
    write_text(a.output, format_sweep_csv(t));
    return static_cast<int>(kOk);
  });
}

inline int cmd_sample(const std::string& theory_text, int count, const std::string& family, const std::string& output,
                      const CommonFlags& flags, std::ostream& err) {
  return guarded(err, [&] {
    const TheoryDescriptor th = parse_theory(theory_text);
    const auto rows = run_sample(th, count, flags.seed, parse_sample_family(family), flags.threads);
    write_text(output, format_sample_csv(rows));
    return static_cast<int>(kOk);
  });
}

inline int cmd_check(const std::string& theory_text, int count, double tolerance_scale, const CommonFlags& flags,
                     std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const TheoryDescriptor th = parse_theory(theory_text);
    CheckOptions co;
    co.count = count;
    co.seed = flags.seed;
    co.tolerance_scale = tolerance_scale;
    co.threads = flags.threads;
    co.measure = measure_options(flags, th);
    const CheckReport rep = run_check(th, co);
    out << format_check_report(rep);
    return static_cast<int>(rep.passed() ? kOk : kFailure);
  });
}

inline int cmd_stabilizers(int n, const std::string& output, std::ostream& err) {
  return guarded(err, [&] {
    if (n < 1 || n > 3) throw ParseError("stabilizers: n must be in 1..3");
    write_text(output, format_states(stabilizer_set(n).states));
    return static_cast<int>(kOk);
  });
}

}  // namespace qgauge::cli
