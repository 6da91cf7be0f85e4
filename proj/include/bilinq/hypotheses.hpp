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

#pragma once

#include <string>
#include <vector>

#include "bilinq/operators.hpp"
#include "bilinq/spectral.hpp"

namespace bilinq {

/// λ1 - λk == λp - λq with {1,k} != {p,q}, k != 1 (indices one-based).
struct ResonanceViolation {
  int k = 0;
  int p = 0;
  int q = 0;
  double gap = 0.0;  ///< |(λ1 - λk) - (λp - λq)|
};

struct HypothesisTolerances {
  double coupling = 1e-8;
  double resonance = 1e-6;
};

/// Truncated-level check of the coupling and non-resonance conditions on
/// (V, Q1, Q2). Passing is necessary at level M, not a statement about the
/// full operator.
struct CouplingReport {
  int modes = 0;
  HypothesisTolerances tolerances;
  std::vector<double> c1;  ///< <Q1 φ1, φk> for k = 2..M
  std::vector<double> c2;  ///< <Q2 φ1, φk> for k = 2..M
  std::vector<int> j0;     ///< k with |c1_k| < tol
  std::vector<int> j_neq0;
  std::vector<int> uncoupled;  ///< k in J0 with |c2_k| < tol as well
  std::vector<ResonanceViolation> resonance_violations;
  bool degenerate_spectrum = false;

  bool coupling_ok() const { return uncoupled.empty(); }
  bool resonance_ok() const { return resonance_violations.empty(); }
};

/// Fills c1, c2, J0 and J≠0 from the first rows of H1, H2.
CouplingReport coupling_coefficients(const ControlOperators& ops,
                                     double coupling_tol = 1e-8);

CouplingReport check_hypotheses(const SpectralBasis& basis,
                                const ControlOperators& ops,
                                const HypothesisTolerances& tol = {});

std::string format_report(const CouplingReport& report);

/// Single-line JSON summary.
std::string summary_json(const CouplingReport& report);

}  // namespace bilinq
