// Copyright 2026 The bilinq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bilinq/hypotheses.hpp"

#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

namespace bilinq {

CouplingReport coupling_coefficients(const ControlOperators& ops,
                                     double coupling_tol) {
  CouplingReport report;
  report.modes = ops.modes();
  report.tolerances.coupling = coupling_tol;
  for (int k = 2; k <= ops.modes(); ++k) {
    const double c1 = ops.h1(0, k - 1);
    const double c2 = ops.h2(0, k - 1);
    report.c1.push_back(c1);
    report.c2.push_back(c2);
    (std::abs(c1) < coupling_tol ? report.j0 : report.j_neq0).push_back(k);
  }
  return report;
}

CouplingReport check_hypotheses(const SpectralBasis& basis,
                                const ControlOperators& ops,
                                const HypothesisTolerances& tol) {
  CouplingReport report = coupling_coefficients(ops, tol.coupling);
  report.tolerances = tol;
  report.degenerate_spectrum = basis.degenerate;

  for (int k : report.j0) {
    if (std::abs(report.c2[k - 2]) < tol.coupling) report.uncoupled.push_back(k);
  }

  const auto& lambda = ops.lambda;
  const int m = ops.modes();
  for (int k = 2; k <= m; ++k) {
    const double target = lambda(0) - lambda(k - 1);
    for (int p = 1; p <= m; ++p) {
      for (int q = 1; q <= m; ++q) {
        if ((p == 1 && q == k) || (p == k && q == 1)) continue;
        const double gap = std::abs(target - (lambda(p - 1) - lambda(q - 1)));
        if (gap < tol.resonance) {
          report.resonance_violations.push_back({k, p, q, gap});
        }
      }
    }
  }
  return report;
}

std::string format_report(const CouplingReport& r) {
  std::string out;
  out += fmt::format("Truncated hypothesis check at M = {} modes\n", r.modes);
  out += fmt::format("(necessary conditions at this truncation only)\n\n");
  out += fmt::format("{:>4}  {:>22}  {:>22}\n", "k", "<Q1 phi1, phik>",
                     "<Q2 phi1, phik>");
  for (std::size_t i = 0; i < r.c1.size(); ++i) {
    out += fmt::format("{:>4}  {:>22.15e}  {:>22.15e}\n", i + 2, r.c1[i], r.c2[i]);
  }
  out += fmt::format("\nJ0   (|c1| < {:g}) = {{{}}}\n", r.tolerances.coupling,
                     fmt::join(r.j0, ", "));
  out += fmt::format("J!=0               = {{{}}}\n", fmt::join(r.j_neq0, ", "));
  out += fmt::format("(i)   coupling via Q1 or Q2: {}", r.coupling_ok() ? "ok" : "VIOLATED");
  if (!r.coupling_ok()) {
    out += fmt::format(" (uncoupled k = {})", fmt::join(r.uncoupled, ", "));
  }
  out += fmt::format("\n(ii)  |J0| = {} (finite at truncation level)\n", r.j0.size());
  out += fmt::format("(iii) non-resonance (tol {:g}): {}\n", r.tolerances.resonance,
                     r.resonance_ok()
                         ? std::string("ok")
                         : fmt::format("VIOLATED, {} quadruple(s)",
                                       r.resonance_violations.size()));
  for (const auto& v : r.resonance_violations) {
    out += fmt::format("      lambda1 - lambda{} ~ lambda{} - lambda{}  (gap {:.3e})\n",
                       v.k, v.p, v.q, v.gap);
  }
  if (r.degenerate_spectrum) out += "warning: degenerate eigenvalues detected\n";
  return out;
}

std::string summary_json(const CouplingReport& r) {
  nlohmann::json j;
  j["modes"] = r.modes;
  j["coupling_tol"] = r.tolerances.coupling;
  j["resonance_tol"] = r.tolerances.resonance;
  j["c1"] = r.c1;
  j["c2"] = r.c2;
  j["j0"] = r.j0;
  j["j_neq0"] = r.j_neq0;
  j["uncoupled"] = r.uncoupled;
  j["coupling_ok"] = r.coupling_ok();
  j["resonance_ok"] = r.resonance_ok();
  j["degenerate_spectrum"] = r.degenerate_spectrum;
  nlohmann::json res = nlohmann::json::array();
  for (const auto& v : r.resonance_violations) {
    res.push_back({{"k", v.k}, {"p", v.p}, {"q", v.q}, {"gap", v.gap}});
  }
  j["resonance_violations"] = res;
  return j.dump();
}

}  // namespace bilinq
