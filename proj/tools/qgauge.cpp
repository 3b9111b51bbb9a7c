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


#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qgauge/cli/commands.hpp"

namespace {

void add_common(CLI::App* app, qgauge::cli::CommonFlags& f) {
  app->add_option("--tol", f.tol, "ADMM relative duality gap")->capture_default_str();
  app->add_option("--max-iter", f.max_iter, "ADMM / Frank-Wolfe iteration limit")->capture_default_str();
  app->add_option("--max-rounds", f.max_rounds, "cutting-plane round limit")->capture_default_str();
  app->add_option("--restarts", f.restarts, "convex-roof restarts")->capture_default_str();
  app->add_option("--seed", f.seed, "random seed")->capture_default_str();
  app->add_option("--threads", f.threads, "worker threads for batch commands")->capture_default_str();
  app->add_option("--dictionary", f.dictionary, "vertex list overriding the theory's free pure states");
  app->add_option("--route", f.route, "auto, closed_form or solver")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qgauge::cli;
  CLI::App app{"qgauge: resource gauges, robustness measures and witnesses"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qgauge 0.1.0");

  CommonFlags mflags;
  std::string state_path, theory, measure;
  auto* measure_cmd = app.add_subcommand("measure", "evaluate one measure on a state file");
  measure_cmd->add_option("state", state_path, "JSON state file")->required();
  measure_cmd->add_option("theory", theory, "theory, e.g. magic:n=1 or coherence:d=3,k=1")->required();
  measure_cmd->add_option("measure", measure, "measure name")->required();
  measure_cmd->add_option("--format", mflags.format, "csv or json")->capture_default_str();
  measure_cmd->add_option("--witness", mflags.witness, "none, print or file")->capture_default_str();
  measure_cmd->add_option("--witness-file", mflags.witness_file, "output path for --witness file");
  add_common(measure_cmd, mflags);

  CommonFlags sflags;
  SweepArgs sweep;
  std::string measures_csv;
  auto* sweep_cmd = app.add_subcommand("sweep", "measure curves along a line of states");
  sweep_cmd->add_option("--family", sweep.family, "magic_T_mix(n) or custom_line")->capture_default_str();
  sweep_cmd->add_option("--theory", sweep.theory, "theory for custom_line");
  sweep_cmd->add_option("--rho0", sweep.rho0, "custom_line start state file");
  sweep_cmd->add_option("--rho1", sweep.rho1, "custom_line end state file");
  sweep_cmd->add_option("--points", sweep.points, "evenly spaced grid points on [0, 1]")->capture_default_str();
  sweep_cmd->add_option("--grid", sweep.grid, "explicit alpha values (overrides --points)")->delimiter(',');
  sweep_cmd->add_option("--measures", sweep.measures, "comma-separated measure list")->delimiter(',');
  sweep_cmd->add_option("-o,--output", sweep.output, "CSV output path ('-' for stdout)")->capture_default_str();
  add_common(sweep_cmd, sflags);

  CommonFlags pflags;
  std::string sample_theory, sample_family = "haar", sample_out = "-";
  int sample_count = 1000;
  auto* sample_cmd = app.add_subcommand("sample", "gauge values of random pure states");
  sample_cmd->add_option("theory", sample_theory, "theory string")->required();
  sample_cmd->add_option("--count", sample_count, "number of states")->capture_default_str();
  sample_cmd->add_option("--family", sample_family, "haar, free or product")->capture_default_str();
  sample_cmd->add_option("-o,--output", sample_out, "CSV output path ('-' for stdout)")->capture_default_str();
  add_common(sample_cmd, pflags);

  CommonFlags cflags;
  cflags.restarts = 4;
  std::string check_theory;
  int check_count = 50;
  double tolerance_scale = 1.0;
  auto* check_cmd = app.add_subcommand("check", "run the invariant suite on random states");
  check_cmd->add_option("theory", check_theory, "polytope theory string")->required();
  check_cmd->add_option("--count", check_count, "number of states")->capture_default_str();
  check_cmd->add_option("--tolerance-scale", tolerance_scale, "multiplies every property tolerance")
      ->capture_default_str();
  add_common(check_cmd, cflags);

  int stab_n = 1;
  std::string stab_out = "-";
  auto* stab_cmd = app.add_subcommand("stabilizers", "list the pure stabilizer states of n qubits");
  stab_cmd->add_option("n", stab_n, "number of qubits (1..3)")->required();
  stab_cmd->add_option("-o,--output", stab_out, "output path ('-' for stdout)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParseError;
  }

  if (*measure_cmd) return cmd_measure(state_path, theory, measure, mflags, std::cout, std::cerr);
  if (*sweep_cmd) return cmd_sweep(sweep, sflags, std::cerr);
  if (*sample_cmd) return cmd_sample(sample_theory, sample_count, sample_family, sample_out, pflags, std::cerr);
  if (*check_cmd) return cmd_check(check_theory, check_count, tolerance_scale, cflags, std::cout, std::cerr);
  if (*stab_cmd) return cmd_stabilizers(stab_n, stab_out, std::cerr);
  return kParseError;
}
