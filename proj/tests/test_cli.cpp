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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qgauge/cli/commands.hpp"

namespace qgauge::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("qgauge_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_state(const std::string& name, const json& j) const {
    save_json(path(name), j);
    return path(name);
  }

  static std::string read(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

TEST_F(CliTest, MeasureCsvOnTState) {
  const std::string s = write_state("t.json", state_to_json(t_state(1)));
  std::ostringstream out, err;
  ASSERT_EQ(cmd_measure(s, "magic:n=1", "generalized_robustness", {}, out, err), kOk) << err.str();
  std::istringstream lines(out.str());
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(header, record_columns());
  EXPECT_EQ(row.rfind("generalized_robustness,magic:n=1,0.26794919", 0), 0u) << row;
}

TEST_F(CliTest, MeasureJsonWithWitness) {
  const std::string s = write_state("t.json", state_to_json(t_state(1)));
  CommonFlags f;
  f.format = "json";
  f.witness = "print";
  std::ostringstream out, err;
  ASSERT_EQ(cmd_measure(s, "magic:n=1", "standard_robustness", f, out, err), kOk) << err.str();
  const json j = json::parse(out.str());
  EXPECT_NEAR(j.at("value").get<double>(), (std::sqrt(3.0) - 1.0) / 2.0, 1e-9);
  EXPECT_TRUE(j.at("certified").get<bool>());
  EXPECT_EQ(j.at("witness_kind"), "standard");
  EXPECT_EQ(matrix_from_json(j.at("witness")).rows(), 2);
}

TEST_F(CliTest, MeasureWitnessFile) {
  const std::string s = write_state("t.json", state_to_json(t_state(1)));
  CommonFlags f;
  f.witness = "file";
  f.witness_file = path("w.json");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_measure(s, "magic:n=1", "generalized_robustness", f, out, err), kOk) << err.str();
  const json w = json::parse(read(path("w.json")));
  EXPECT_EQ(w.at("kind"), "generalized");
  const CMatrix m = matrix_from_json(w);
  const WitnessCheck wc = witness_validate(m, DensityMatrix(t_state(1)), TheoryDescriptor::magic(1), WitnessKind::generalized);
  EXPECT_TRUE(wc.feasible());
  f.witness_file.clear();
  EXPECT_EQ(cmd_measure(s, "magic:n=1", "generalized_robustness", f, out, err), kParseError);
}

TEST_F(CliTest, MeasureExitCodes) {
  const std::string s = write_state("t.json", state_to_json(t_state(1)));
  std::ostringstream out, err;
  EXPECT_EQ(cmd_measure(s, "magic:n=1", "entropy", {}, out, err), kParseError);
  EXPECT_EQ(cmd_measure(s, "magic:n=9", "base_gauge", {}, out, err), kParseError);
  EXPECT_EQ(cmd_measure(s, "magic:n=2", "base_gauge", {}, out, err), kParseError);
  EXPECT_EQ(cmd_measure(path("missing.json"), "magic:n=1", "base_gauge", {}, out, err), kParseError);
  EXPECT_EQ(cmd_measure(s, "magic:n=1", "negativity", {}, out, err), kUnsupported);
  CommonFlags bad;
  bad.tol = -1.0;
  EXPECT_EQ(cmd_measure(s, "magic:n=1", "base_gauge", bad, out, err), kParseError);
  bad = {};
  bad.route = "fastest";
  EXPECT_EQ(cmd_measure(s, "magic:n=1", "base_gauge", bad, out, err), kParseError);
  const std::string m = write_state("mixed.json", state_to_json(DensityMatrix::maximally_mixed({2, 2})));
  EXPECT_EQ(cmd_measure(m, "schmidt:dA=2,dB=2,k=1", "generalized_robustness", {}, out, err), kUnsupported);
  EXPECT_EQ(cmd_measure(m, "schmidt:dA=2,dB=2,k=1", "negativity", {}, out, err), kOk);
}

TEST_F(CliTest, StateJsonRoundTrip) {
  const StateVector psi = sample_pure({2, 3}, 4);
  const LoadedState a = state_from_json(json::parse(state_to_json(psi).dump()));
  ASSERT_TRUE(a.pure.has_value());
  EXPECT_LT((a.pure->amplitudes() - psi.amplitudes()).norm(), 1e-15);
  EXPECT_EQ(a.rho.dims(), (Dims{2, 3}));
  const DensityMatrix rho = sample_mixed({3}, 2, 5);
  const LoadedState b = state_from_json(json::parse(state_to_json(rho).dump()));
  EXPECT_FALSE(b.pure.has_value());
  EXPECT_LT((b.rho.matrix() - rho.matrix()).norm(), 1e-15);
}

TEST_F(CliTest, StateJsonRejectsMalformed) {
  for (const char* text : {R"([])", R"({"dims":[2],"re":[1,0],"im":[0,0]})", R"({"kind":"pure","re":[1,0],"im":[0,0]})",
                           R"({"kind":"pure","dims":[2],"re":[1,1],"im":[0,0]})",
                           R"({"kind":"pure","dims":[2],"re":[1],"im":[0]})",
                           R"({"kind":"mixed","dims":[2],"re":[[1,0],[0,1]],"im":[[0,0],[0,0]]})",
                           R"({"kind":"thermal","dims":[2],"re":[1,0],"im":[0,0]})"}) {
    EXPECT_THROW(state_from_json(json::parse(text)), ParseError) << text;
  }
}

TEST_F(CliTest, VertexListRoundTripAndErrors) {
  const auto& states = stabilizer_set(2).states;
  std::istringstream in(format_states(states));
  const auto back = parse_states(in, {2, 2});
  ASSERT_EQ(back.size(), states.size());
  // 17 digits round-trip exactly; renormalizing on input may move the last bit.
  for (std::size_t i = 0; i < states.size(); ++i) EXPECT_LE((back[i].amplitudes() - states[i].amplitudes()).norm(), 1e-15);
  for (const char* text : {"", "x\n", "2\n1 0 0 0\n", "1\n1 0 0\n", "1\n2 0 0 0\n", "0\n"}) {
    std::istringstream bad(text);
    EXPECT_THROW(parse_states(bad, {2}), ParseError) << text;
  }
}

TEST_F(CliTest, StabilizersCommand) {
  std::ostringstream err;
  ASSERT_EQ(cmd_stabilizers(2, path("s2.txt"), err), kOk);
  std::ifstream in(path("s2.txt"));
  EXPECT_EQ(parse_states(in, {2, 2}).size(), 60u);
  EXPECT_EQ(cmd_stabilizers(4, path("s4.txt"), err), kParseError);
  EXPECT_EQ(cmd_stabilizers(1, path("no/such/dir/s.txt"), err), kWriteError);
}

TEST_F(CliTest, DictionaryOverrideFromFile) {
  std::ostringstream err, out1, out2;
  ASSERT_EQ(cmd_stabilizers(1, path("s1.txt"), err), kOk);
  const std::string s = write_state("t.json", state_to_json(t_state(1)));
  CommonFlags f;
  f.format = "json";
  ASSERT_EQ(cmd_measure(s, "magic:n=1", "generalized_robustness", f, out1, err), kOk);
  f.dictionary = path("s1.txt");
  ASSERT_EQ(cmd_measure(s, "magic:n=1", "generalized_robustness", f, out2, err), kOk);
  EXPECT_NEAR(json::parse(out1.str()).at("value").get<double>(), json::parse(out2.str()).at("value").get<double>(), 1e-12);
  f.dictionary = path("missing.txt");
  EXPECT_EQ(cmd_measure(s, "magic:n=1", "generalized_robustness", f, out2, err), kParseError);
}

TEST_F(CliTest, SweepIsByteIdenticalAcrossRuns) {
  SweepArgs a;
  a.points = 6;
  a.measures = {"standard_robustness", "generalized_robustness"};
  std::ostringstream err;
  a.output = path("a.csv");
  ASSERT_EQ(cmd_sweep(a, {}, err), kOk) << err.str();
  a.output = path("b.csv");
  ASSERT_EQ(cmd_sweep(a, {}, err), kOk);
  const std::string first = read(path("a.csv"));
  EXPECT_EQ(first, read(path("b.csv")));
  EXPECT_EQ(first.substr(0, first.find('\n')), "alpha,standard_robustness,generalized_robustness");
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 7);
}

TEST_F(CliTest, SweepCustomLineAndErrors) {
  SweepArgs a;
  a.family = "custom_line";
  a.theory = "coherence:d=2,k=1";
  CVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  a.rho0 = write_state("r0.json", state_to_json(DensityMatrix::maximally_mixed({2})));
  a.rho1 = write_state("r1.json", state_to_json(StateVector({2}, plus)));
  a.grid = {0.0, 0.5, 1.0};
  a.measures = {"generalized_robustness", "nuclear_gauge"};
  a.output = path("line.csv");
  std::ostringstream err;
  ASSERT_EQ(cmd_sweep(a, {}, err), kOk) << err.str();
  // Along the line the coherence is alpha: R_g = alpha, nuclear = 1 + alpha.
  std::istringstream in(read(path("line.csv")));
  std::string line;
  std::getline(in, line);
  for (double alpha : {0.0, 0.5, 1.0}) {
    std::getline(in, line);
    std::stringstream ls(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ls, cell, ',')) v.push_back(std::stod(cell));
    ASSERT_EQ(v.size(), 3u);
    EXPECT_NEAR(v[1], alpha, 1e-6);
    EXPECT_NEAR(v[2], 1.0 + alpha, 1e-6);
  }
  a.grid = {0.5, 0.2};
  EXPECT_EQ(cmd_sweep(a, {}, err), kParseError);
  a.grid = {};
  a.points = 1;
  EXPECT_EQ(cmd_sweep(a, {}, err), kParseError);
  a.points = 3;
  a.theory.clear();
  EXPECT_EQ(cmd_sweep(a, {}, err), kParseError);
  SweepArgs t;
  t.family = "magic_T_mix(4)";
  EXPECT_EQ(cmd_sweep(t, {}, err), kParseError);
  t.family = "magic_T_mix(1)";
  t.measures = {"entropy"};
  EXPECT_EQ(cmd_sweep(t, {}, err), kParseError);
}

TEST_F(CliTest, SampleCommand) {
  std::ostringstream err;
  ASSERT_EQ(cmd_sample("coherence:d=4,k=2", 25, "haar", path("s.csv"), {}, err), kOk);
  const std::string text = read(path("s.csv"));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 26);
  ASSERT_EQ(cmd_sample("schmidt:dA=3,dB=3,k=2", 10, "free", path("f.csv"), {}, err), kOk);
  for (const SampleRow& r : run_sample(TheoryDescriptor::schmidt(3, 3, 2), 10, 1, SampleFamily::free)) {
    EXPECT_NEAR(r.gauge, 1.0, 1e-9);
    EXPECT_EQ(r.geometric, 0.0);
  }
  for (const SampleRow& r : run_sample(TheoryDescriptor::coherence(4, 2), 20, 3)) {
    EXPECT_GE(r.normalized, 0.0);
    EXPECT_LE(r.normalized, 1.0 + 1e-12);
  }
  EXPECT_EQ(cmd_sample("coherence:d=4,k=2", 5, "gibbs", "-", {}, err), kParseError);
  EXPECT_EQ(cmd_sample("coherence:d=4,k=2", 0, "haar", "-", {}, err), kParseError);
}

TEST_F(CliTest, CheckCommand) {
  std::ostringstream out, err;
  CommonFlags f;
  f.restarts = 2;
  ASSERT_EQ(cmd_check("magic:n=1", 4, 1.0, f, out, err), kOk) << out.str() << err.str();
  EXPECT_NE(out.str().find("all properties passed"), std::string::npos);
  EXPECT_EQ(cmd_check("schmidt:dA=2,dB=2,k=1", 4, 1.0, f, out, err), kUnsupported);
  EXPECT_EQ(cmd_check("magic:n=1", 0, 1.0, f, out, err), kParseError);
}

}  // namespace
}  // namespace qgauge::cli
