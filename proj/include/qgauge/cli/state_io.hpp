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

// JSON state files and plain-text vertex lists.
//
// State file: {"kind": "pure"|"mixed", "dims": [...], "re": [...], "im": [...]}.
// Pure amplitudes are flat lists; matrices are row-major, either nested rows or
// one flat list of d*d numbers.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qgauge/linalg.hpp"
#include "qgauge/theory.hpp"

namespace qgauge::cli {

using nlohmann::json;

/// Write failures map to their own exit code.
class WriteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadedState {
  DensityMatrix rho;
  std::optional<StateVector> pure;  // set for kind = "pure"
};

/// Fixed 12 significant digits; "inf", "-inf" and "nan" for non-finite values.
inline std::string format_number(double v, int digits = 12) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

namespace detail {

inline std::vector<double> flat_numbers(const json& j, const char* field) {
  std::vector<double> out;
  if (!j.is_array()) throw ParseError(std::string("state file: '") + field + "' must be an array");
  for (const auto& e : j) {
    if (e.is_array()) {
      for (const auto& x : e) {
        if (!x.is_number()) throw ParseError(std::string("state file: non-numeric entry in '") + field + "'");
        out.push_back(x.get<double>());
      }
    } else if (e.is_number()) {
      out.push_back(e.get<double>());
    } else {
      throw ParseError(std::string("state file: non-numeric entry in '") + field + "'");
    }
  }
  return out;
}

inline std::vector<double> field(const json& j, const char* name, std::size_t expected) {
  if (!j.contains(name)) {
    if (std::string(name) == "im") return std::vector<double>(expected, 0.0);
    throw ParseError(std::string("state file: missing '") + name + "'");
  }
  auto v = flat_numbers(j.at(name), name);
  if (v.size() != expected) {
    throw ParseError(std::string("state file: '") + name + "' has " + std::to_string(v.size()) + " entries, expected " +
                     std::to_string(expected));
  }
  return v;
}

}  // namespace detail

inline LoadedState state_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("state file: top level must be an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ParseError("state file: missing 'kind'");
  if (!j.contains("dims") || !j.at("dims").is_array()) throw ParseError("state file: missing 'dims'");
  Dims dims;
  for (const auto& d : j.at("dims")) {
    if (!d.is_number_integer() || d.get<int>() < 1) throw ParseError("state file: dims must be positive integers");
    dims.push_back(d.get<int>());
  }
  if (dims.empty()) throw ParseError("state file: empty dims");
  const int d = product(dims);
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "pure") {
      const auto re = detail::field(j, "re", d);
      const auto im = detail::field(j, "im", d);
      CVector v(d);
      for (int i = 0; i < d; ++i) v(i) = cplx(re[i], im[i]);
      if (std::abs(v.norm() - 1.0) > 1e-8) throw ParseError("state file: pure state is not normalized");
      StateVector psi = StateVector::normalized(dims, v);
      return {DensityMatrix(psi), psi};
    }
    if (kind == "mixed") {
      const auto re = detail::field(j, "re", static_cast<std::size_t>(d) * d);
      const auto im = detail::field(j, "im", static_cast<std::size_t>(d) * d);
      CMatrix m(d, d);
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) m(r, c) = cplx(re[r * d + c], im[r * d + c]);
      }
      return {DensityMatrix(dims, m), std::nullopt};
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("state file: ") + e.what());
  }
  throw ParseError("state file: kind must be 'pure' or 'mixed'");
}

inline json matrix_to_json(const CMatrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ri = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return {{"re", re}, {"im", im}};
}

inline CMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("re")) throw ParseError("matrix: missing 're'");
  const auto re = detail::flat_numbers(j.at("re"), "re");
  const auto d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(re.size()))));
  if (static_cast<std::size_t>(d) * d != re.size()) throw ParseError("matrix: not square");
  const auto im = detail::field(j, "im", re.size());
  CMatrix m(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) m(r, c) = cplx(re[r * d + c], im[r * d + c]);
  }
  return m;
}

inline json state_to_json(const StateVector& psi) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    re.push_back(psi.amplitudes()(i).real());
    im.push_back(psi.amplitudes()(i).imag());
  }
  return {{"kind", "pure"}, {"dims", psi.dims()}, {"re", re}, {"im", im}};
}

inline json state_to_json(const DensityMatrix& rho) {
  json j = matrix_to_json(rho.matrix());
  j["kind"] = "mixed";
  j["dims"] = rho.dims();
  return j;
}

inline LoadedState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open state file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("state file '" + path + "': " + e.what());
  }
  return state_from_json(j);
}

/// Writes `text` to `path`, or to stdout for "-".
inline void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw WriteError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw WriteError("write to '" + path + "' failed");
}

inline void save_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

// Vertex list: first line holds the count, then one state per line as
// "re_0 im_0 re_1 im_1 ..." with 17 significant digits.

inline std::string format_states(const std::vector<StateVector>& states) {
  std::ostringstream os;
  os << states.size() << "\n";
  os << std::setprecision(17);
  for (const auto& s : states) {
    for (Eigen::Index i = 0; i < s.dim(); ++i) {
      if (i) os << ' ';
      os << s.amplitudes()(i).real() << ' ' << s.amplitudes()(i).imag();
    }
    os << "\n";
  }
  return os.str();
}

inline std::vector<StateVector> parse_states(std::istream& in, const Dims& dims) {
  const int d = product(dims);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("vertex list: empty input");
  long count = 0;
  try {
    std::size_t used = 0;
    count = std::stol(line, &used);
    if (line.find_first_not_of(" \t\r", used) != std::string::npos) throw ParseError("vertex list: bad count line");
  } catch (const std::logic_error&) {
    throw ParseError("vertex list: bad count line");
  }
  if (count < 1) throw ParseError("vertex list: count must be positive");
  std::vector<StateVector> out;
  while (static_cast<long>(out.size()) < count) {
    if (!std::getline(in, line)) throw ParseError("vertex list: fewer states than the count line says");
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::vector<double> nums;
    double x;
    while (ls >> x) nums.push_back(x);
    if (!ls.eof() || nums.size() != static_cast<std::size_t>(2 * d)) {
      throw ParseError("vertex list: state " + std::to_string(out.size()) + " needs " + std::to_string(2 * d) +
                       " numbers");
    }
    CVector v(d);
    for (int i = 0; i < d; ++i) v(i) = cplx(nums[2 * i], nums[2 * i + 1]);
    if (std::abs(v.norm() - 1.0) > 1e-8) throw ParseError("vertex list: state " + std::to_string(out.size()) + " is not normalized");
    out.push_back(StateVector::normalized(dims, v));
  }
  return out;
}

inline std::vector<StateVector> load_states(const std::string& path, const Dims& dims) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open vertex list '" + path + "'");
  return parse_states(in, dims);
}

}  // namespace qgauge::cli
