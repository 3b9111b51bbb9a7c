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

// Invariant suite over random states of a polytope theory: faithfulness, the
// ordering of the measures, polar identities and witness feasibility.

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qgauge/cli/state_io.hpp"
#include "qgauge/cli/sweep.hpp"
#include "qgauge/measures.hpp"

namespace qgauge::cli {

struct PropertyResult {
  std::string name;
  double tolerance = 0.0;
  double worst = -std::numeric_limits<double>::infinity();  // largest violation seen; pass iff <= tolerance
  int evaluated = 0;
  int failures = 0;

  void record(double violation) {
    ++evaluated;
    if (std::isnan(violation)) violation = std::numeric_limits<double>::infinity();
    worst = std::max(worst, violation);
    if (violation > tolerance) ++failures;
  }
  bool passed() const { return failures == 0; }
};

struct CheckReport {
  std::string theory;
  int count = 0;
  int free_states = 0;
  std::vector<PropertyResult> properties;

  bool passed() const {
    return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.passed(); });
  }
};

struct CheckOptions {
  int count = 50;
  std::uint64_t seed = 1;
  double tolerance_scale = 1.0;  // multiplies every property tolerance
  int threads = 1;
  MeasureOptions measure;
};

namespace detail {

// Every fourth state is a random mixture of vertices; the rest are random mixed
// states of rank 1..d.
inline DensityMatrix check_state(const PolytopeFreeSet& poly, const Dims& dims, int i, std::uint64_t seed) {
  const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
  const int d = poly.dim();
  if (i % 4 == 0) {
    std::mt19937_64 rng(s);
    std::exponential_distribution<double> expo(1.0);
    std::uniform_int_distribution<int> pick(0, poly.size() - 1);
    const int terms = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::min(poly.size(), d * d)));
    CMatrix m = CMatrix::Zero(d, d);
    double total = 0.0;
    for (int t = 0; t < terms; ++t) {
      const double w = expo(rng);
      m += w * poly.projector(pick(rng));
      total += w;
    }
    return DensityMatrix(dims, CMatrix(m / total));
  }
  const int rank = 1 + (i / 4) % d;
  return sample_mixed(dims, rank, s);
}

struct StateMeasures {
  bool inside = false;
  std::optional<CMatrix> membership_witness;
  MeasureResult rs, base, rg, rand, bfa, mtd, nuclear, roof, geo;
  PolarResult polar;
};

}  // namespace detail

inline CheckReport run_check(const TheoryDescriptor& th, const CheckOptions& opt) {
  if (!th.is_polytope()) throw UnsupportedError("check: the invariant suite needs a polytope theory, got " + th.to_string());
  if (opt.count < 1) throw ParseError("check: count must be positive");
  const auto poly = polytope_for(th, opt.measure);
  const Dims dims = th.state_dims();
  const int d = th.dim();

  std::vector<DensityMatrix> states;
  for (int i = 0; i < opt.count; ++i) states.push_back(detail::check_state(*poly, dims, i, opt.seed));
  std::vector<detail::StateMeasures> data(opt.count);
  parallel_for(opt.count, opt.threads, [&](int i) {
    const DensityMatrix& rho = states[i];
    auto& m = data[i];
    const MembershipCertificate mc = free_membership(rho, *poly);
    m.inside = mc.inside;
    m.membership_witness = mc.witness;
    m.rs = standard_robustness(rho, th, opt.measure);
    m.base = base_gauge(rho, th, opt.measure);
    m.rg = generalized_robustness(rho, th, opt.measure);
    m.rand = random_robustness(rho, th, opt.measure);
    m.bfa = best_free_approximation(rho, th, opt.measure);
    m.mtd = modified_trace_distance(rho, th, opt.measure);
    m.nuclear = nuclear_gauge(rho, th, opt.measure);
    m.roof = convex_roof_upper(rho, th, opt.measure);
    m.geo = geometric_measure(rho, th, opt.measure);
    m.polar = polar_gauge_psd(rho.matrix(), th, opt.measure);
  });

  const double s = opt.tolerance_scale;
  auto prop = [&](const char* name, double tol) {
    PropertyResult p;
    p.name = name;
    p.tolerance = tol * s;
    return p;
  };
  PropertyResult faithful = prop("faithfulness", 0.0);
  PropertyResult membership = prop("membership_certificate", 1e-9);
  PropertyResult chain = prop("base_ge_nuclear_ge_rg_plus_1", 1e-6);
  PropertyResult roof = prop("roof_ge_nuclear", 1e-5);
  PropertyResult purity = prop("rg_ge_purity_over_polar", 1e-6);
  PropertyResult mtd = prop("mtd_le_rg", 1e-6);
  PropertyResult random = prop("random_ge_standard", 1e-6);
  PropertyResult polar_eq = prop("polar_equality_psd", 1e-10);
  PropertyResult threshold = prop("witness_threshold", 1e-9);
  PropertyResult witness = prop("witness_feasibility", 1e-7);
  PropertyResult bounds = prop("witness_bound_matches_value", 1e-5);
  PropertyResult geo = prop("geometric_le_one_minus_polar", 1e-9);
  PropertyResult certified = prop("certified_gap", 1e-5);

  std::mt19937_64 psd_rng(opt.seed ^ 0x5bd1e995ULL);
  int free_states = 0;
  const double faithful_cut = 1e-6 * s;
  for (int i = 0; i < opt.count; ++i) {
    const DensityMatrix& rho = states[i];
    const auto& m = data[i];
    free_states += m.inside;

    // Faithfulness: every listed measure vanishes iff the state is free.
    std::vector<double> vals = {m.rg.value, m.nuclear.value - 1.0, m.roof.value - 1.0, m.bfa.value, m.mtd.value};
    if (m.rs.finite()) vals.push_back(m.rs.value);
    const double hi = *std::max_element(vals.begin(), vals.end());
    const double lo = *std::min_element(vals.begin(), vals.end());
    faithful.record(m.inside ? hi - faithful_cut : faithful_cut - lo);

    if (!m.inside) {
      // W separates: <W, sigma_i> >= 0 on vertices, <W, rho> < 0.
      const CMatrix& w = *m.membership_witness;
      const double vmin = poly->overlaps(w).minCoeff();
      membership.record(std::max(-vmin, hs_inner(w, rho.matrix()) + 1e-12));
    }

    double v = m.rg.lower + 1.0 - m.nuclear.upper;
    if (m.base.finite()) v = std::max(v, m.nuclear.lower - m.base.upper);
    chain.record(v);
    roof.record(m.nuclear.lower - m.roof.upper);
    purity.record((rho.purity() / m.polar.value - 1.0) - m.rg.upper);
    mtd.record(m.mtd.lower - m.rg.upper);
    if (!m.rs.finite()) {
      random.record(m.rand.finite() ? std::numeric_limits<double>::infinity() : -1.0);
    } else if (m.rand.finite()) {
      random.record(m.rs.lower - m.rand.upper);
    } else {
      random.record(-1.0);
    }

    // Gamma°_{S+}(P) = max_i <v_i|P|v_i> against Gamma°_S(P) = max_ij |<v_i|P|v_j>|.
    for (int rep = 0; rep < 2; ++rep) {
      const CMatrix p = rep == 0 ? rho.matrix() : sample_mixed(dims, 1 + static_cast<int>(psd_rng() % d), psd_rng()).matrix();
      const CMatrix g = poly->dictionary.adjoint() * p * poly->dictionary;
      polar_eq.record(std::abs(polar_gauge_psd(p, th, opt.measure).value - g.cwiseAbs().maxCoeff()));
    }

    // lambda* I - rho is nonnegative on all vertices, tight at the argmax.
    {
      const CMatrix q = m.polar.lambda_star * CMatrix::Identity(d, d) - rho.matrix();
      const RVector ov = poly->overlaps(q);
      threshold.record(std::max(-ov.minCoeff(), std::abs(ov(m.polar.argmax))));
    }

    auto check_witness = [&](const MeasureResult& r, WitnessKind kind) {
      if (!r.witness) return;
      const WitnessCheck wc = witness_validate(*r.witness, rho, th, kind, opt.measure);
      witness.record(-std::min({wc.free_residual, wc.identity_residual, wc.upper_residual}));
      bounds.record(std::abs(wc.bound - r.value) / (1.0 + std::abs(r.value)));
    };
    if (m.rs.finite()) check_witness(m.rs, WitnessKind::standard);
    check_witness(m.rg, WitnessKind::generalized);
    check_witness(m.mtd, WitnessKind::generalized);

    geo.record(m.geo.value - (1.0 - m.polar.value) - 2.0 * m.geo.gap());

    for (const MeasureResult* r : {&m.rs, &m.base, &m.rg, &m.rand, &m.bfa, &m.mtd, &m.nuclear}) {
      if (r->finite()) certified.record(r->gap() / (1.0 + std::abs(r->value)));
    }
  }

  CheckReport rep;
  rep.theory = th.to_string();
  rep.count = opt.count;
  rep.free_states = free_states;
  rep.properties = {faithful, membership, chain, roof, purity, mtd, random,
                    polar_eq, threshold, witness, bounds, geo, certified};
  return rep;
}

inline std::string format_check_report(const CheckReport& r) {
  std::ostringstream os;
  os << "theory " << r.theory << ", " << r.count << " states (" << r.free_states << " free)\n";
  for (const auto& p : r.properties) {
    os << (p.passed() ? "PASS " : "FAIL ") << p.name << "  worst=" << format_number(p.worst, 6)
       << "  tol=" << format_number(p.tolerance, 6) << "  n=" << p.evaluated;
    if (p.failures) os << "  failures=" << p.failures;
    os << '\n';
  }
  os << (r.passed() ? "all properties passed" : "some properties FAILED") << '\n';
  return os.str();
}

}  // namespace qgauge::cli
