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

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bilinq/dynamics.hpp"
#include "bilinq/hypotheses.hpp"
#include "bilinq/operators.hpp"

namespace bilinq {

/// Flat experiment description. Text form is one `key = value` per line with
/// `#` comments; a `preset = <name>` line seeds every field before the other
/// keys are applied.
struct ExperimentConfig {
  std::string name = "run";
  std::string potential = "harmonic_centered";
  std::string q1 = "x2";
  std::string q2 = "x";
  int sine_modes = 50;  ///< N
  int modes = 5;        ///< M
  std::vector<std::complex<double>> initial{{1.0, 0.0}, {0.0, 1.0}};
  double gain = 0.05;
  std::optional<double> gamma;  ///< Explicit γ; overrides gamma_target.
  double gamma_target = 0.75;
  Damping damping = Damping::clip;
  Method method = Method::strang;
  FeedbackSampling sampling = FeedbackSampling::midpoint;
  double dt = 1e-3;
  double epsilon = 1e-3;
  std::vector<double> epsilons;            ///< Sweep values.
  std::optional<double> dt_over_epsilon;   ///< Sweep runs use dt = ratio * ε.
  double horizon = 1000.0;
  int stride = 100;
  double sobolev = 1.8;
  bool check_monotone = true;
  double coupling_tol = 1e-8;
  double resonance_tol = 1e-6;
  std::string output_dir = "out";

  /// Throws ConfigError on inconsistent values (M > N, dt > ε, ...).
  void validate() const;

  /// Ordered key/value pairs; parse_config of the rendered text gives back an
  /// equivalent config.
  std::vector<std::pair<std::string, std::string>> to_key_values() const;
  std::string to_text() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Named presets: fig1, fig2, fig3-4, fig5-6, hcn.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// Applies a single `key = value` assignment.
void apply_setting(ExperimentConfig& cfg, const std::string& key,
                   const std::string& value);

std::vector<std::complex<double>> parse_complex_list(const std::string& text);
std::string format_complex_list(const std::vector<std::complex<double>>& v);

/// Everything a run needs, derived from a config. Basis and operators are
/// immutable after construction and may be shared between runs.
struct Problem {
  ExperimentConfig config;
  SpectralBasis basis;
  ControlOperators ops;
  FeedbackParams params;
  ModeVector x0;
};

/// Builds basis, operators, normalised initial state and γ.
Problem resolve(const ExperimentConfig& cfg);

/// Same physics as `base` with a different config for the run-level fields
/// (ε, dt, T, ...). Reuses base's basis and operators.
Problem with_run_config(const Problem& base, const ExperimentConfig& cfg);

IntegratorSpec integrator_spec(const ExperimentConfig& cfg);
RunControl run_control(const ExperimentConfig& cfg);

}  // namespace bilinq
