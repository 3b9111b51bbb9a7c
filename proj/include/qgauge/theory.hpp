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

#include <charconv>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qgauge/linalg.hpp"

namespace qgauge {

/// Raised when a measure or operation is not available for a theory/input.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised on malformed theory strings and state files.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TheoryKind { coherence, schmidt, genuine, magic };

/// Which set of free states is in force.
struct TheoryDescriptor {
  TheoryKind kind = TheoryKind::coherence;
  int d = 1;     // coherence dimension
  int k = 1;     // rank bound (coherence, Schmidt)
  int da = 1;    // Schmidt factors
  int db = 1;
  Dims parties;  // genuine multipartite factors
  int n = 1;     // magic qubit count

  static TheoryDescriptor coherence(int d, int k) {
    if (d < 1 || k < 1 || k > d) throw std::invalid_argument("coherence theory requires 1 <= k <= d");
    TheoryDescriptor t;
    t.kind = TheoryKind::coherence;
    t.d = d;
    t.k = k;
    return t;
  }

  static TheoryDescriptor schmidt(int da, int db, int k) {
    if (da < 1 || db < 1 || k < 1 || k > std::min(da, db)) {
      throw std::invalid_argument("Schmidt theory requires 1 <= k <= min(dA, dB)");
    }
    TheoryDescriptor t;
    t.kind = TheoryKind::schmidt;
    t.da = da;
    t.db = db;
    t.k = k;
    return t;
  }

  static TheoryDescriptor genuine(Dims parties) {
    if (parties.size() < 2 || parties.size() > 12) throw std::invalid_argument("genuine theory requires 2..12 parties");
    for (int p : parties) {
      if (p < 2) throw std::invalid_argument("genuine theory requires local dimensions >= 2");
    }
    TheoryDescriptor t;
    t.kind = TheoryKind::genuine;
    t.parties = std::move(parties);
    return t;
  }

  static TheoryDescriptor magic(int n) {
    if (n < 1 || n > 3) throw std::invalid_argument("magic theory supports 1..3 qubits");
    TheoryDescriptor t;
    t.kind = TheoryKind::magic;
    t.n = n;
    return t;
  }

  /// Factor dimensions of states in this theory.
  Dims state_dims() const {
    switch (kind) {
      case TheoryKind::coherence: return {d};
      case TheoryKind::schmidt: return {da, db};
      case TheoryKind::genuine: return parties;
      case TheoryKind::magic: return Dims(n, 2);
    }
    return {};
  }

  int dim() const { return product(state_dims()); }

  /// Free set is the convex hull of finitely many pure states.
  bool is_polytope() const {
    return kind == TheoryKind::magic || (kind == TheoryKind::coherence && k == 1);
  }

  std::string to_string() const {
    switch (kind) {
      case TheoryKind::coherence: return "coherence:d=" + std::to_string(d) + ",k=" + std::to_string(k);
      case TheoryKind::schmidt:
        return "schmidt:dA=" + std::to_string(da) + ",dB=" + std::to_string(db) + ",k=" + std::to_string(k);
      case TheoryKind::genuine: {
        std::string s = "genuine:dims=";
        for (std::size_t i = 0; i < parties.size(); ++i) s += (i ? "x" : "") + std::to_string(parties[i]);
        return s;
      }
      case TheoryKind::magic: return "magic:n=" + std::to_string(n);
    }
    return {};
  }

  bool operator==(const TheoryDescriptor&) const = default;
};

namespace detail {

inline int parse_int(std::string_view s, std::string_view what) {
  int value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw ParseError("invalid integer for " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return value;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

/// Parses `coherence:d=3,k=1`, `schmidt:dA=3,dB=3,k=2`, `genuine:dims=2x2x2`, `magic:n=1`.
inline TheoryDescriptor parse_theory(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParseError("theory string lacks ':' separator: '" + std::string(text) + "'");
  const std::string_view name = text.substr(0, colon);
  std::map<std::string, std::string, std::less<>> fields;
  for (auto item : detail::split(text.substr(colon + 1), ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("malformed field '" + std::string(item) + "'");
    auto [it, fresh] = fields.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    if (!fresh) throw ParseError("duplicate field '" + it->first + "'");
  }
  auto take = [&](const char* key) {
    auto it = fields.find(key);
    if (it == fields.end()) throw ParseError(std::string("missing field '") + key + "' in theory '" + std::string(text) + "'");
    std::string v = it->second;
    fields.erase(it);
    return v;
  };
  auto finish = [&](TheoryDescriptor t) {
    if (!fields.empty()) throw ParseError("unknown field '" + fields.begin()->first + "'");
    return t;
  };
  try {
    if (name == "coherence") {
      const int d = detail::parse_int(take("d"), "d");
      const int k = detail::parse_int(take("k"), "k");
      return finish(TheoryDescriptor::coherence(d, k));
    }
    if (name == "schmidt") {
      const int da = detail::parse_int(take("dA"), "dA");
      const int db = detail::parse_int(take("dB"), "dB");
      const int k = detail::parse_int(take("k"), "k");
      return finish(TheoryDescriptor::schmidt(da, db, k));
    }
    if (name == "genuine") {
      const std::string dims = take("dims");
      Dims parties;
      for (auto part : detail::split(dims, 'x')) parties.push_back(detail::parse_int(part, "dims"));
      return finish(TheoryDescriptor::genuine(parties));
    }
    if (name == "magic") return finish(TheoryDescriptor::magic(detail::parse_int(take("n"), "n")));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown theory '" + std::string(name) + "'");
}

}  // namespace qgauge
