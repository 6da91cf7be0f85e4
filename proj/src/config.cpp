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

#include "bilinq/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "bilinq/errors.hpp"

namespace bilinq {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, value));
  }
}

int to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, value));
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ConfigError(fmt::format("{}: expected true/false, got '{}'", key, value));
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + num(v[i]);
  return out;
}

}  // namespace

std::vector<std::complex<double>> parse_complex_list(const std::string& text) {
  const auto bad = [](const std::string& item) {
    return ConfigError(fmt::format("bad complex entry '{}'", item));
  };
  const auto number = [&](const std::string& part, const std::string& item) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw bad(item);
    }
    if (used != part.size()) throw bad(item);
    return v;
  };

  // Entries: a | bi | a+bi | a-bi; a bare "i" means 1i.
  std::vector<std::complex<double>> values;
  for (std::string item : split(text, ',')) {
    item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
    if (item.empty()) throw bad(item);
    if (item.back() != 'i') {
      if (item == "+" || item == "-") throw bad(item);
      values.emplace_back(number(item, item), 0.0);
      continue;
    }
    const std::string body = item.substr(0, item.size() - 1);
    std::size_t split_at = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
      if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' &&
          body[i - 1] != 'E') {
        split_at = i;
        break;
      }
    }
    if (split_at == std::string::npos) {
      values.emplace_back(0.0, number(body, item));
    } else {
      const std::string real = body.substr(0, split_at);
      if (real.empty() || real == "+" || real == "-") throw bad(item);
      values.emplace_back(number(real, item), number(body.substr(split_at), item));
    }
  }
  return values;
}

std::string format_complex_list(const std::vector<std::complex<double>>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += fmt::format("{}{:.17g}{:+.17g}i", i ? ", " : "", v[i].real(), v[i].imag());
  }
  return out;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key,
                   const std::string& value) {
  if (key == "name") cfg.name = value;
  else if (key == "potential") cfg.potential = value;
  else if (key == "q1") cfg.q1 = value;
  else if (key == "q2") cfg.q2 = value;
  else if (key == "sine_modes" || key == "N") cfg.sine_modes = to_int(key, value);
  else if (key == "modes" || key == "M") cfg.modes = to_int(key, value);
  else if (key == "initial") cfg.initial = parse_complex_list(value);
  else if (key == "gain" || key == "k") cfg.gain = to_double(key, value);
  else if (key == "gamma") {
    if (value == "auto") cfg.gamma.reset();
    else cfg.gamma = to_double(key, value);
  }
  else if (key == "gamma_target") cfg.gamma_target = to_double(key, value);
  else if (key == "damping") cfg.damping = parse_damping(value);
  else if (key == "method") cfg.method = parse_method(value);
  else if (key == "feedback_sampling") cfg.sampling = parse_sampling(value);
  else if (key == "dt") cfg.dt = to_double(key, value);
  else if (key == "epsilon") cfg.epsilon = to_double(key, value);
  else if (key == "epsilons") {
    cfg.epsilons.clear();
    if (!value.empty()) {
      for (const auto& part : split(value, ',')) cfg.epsilons.push_back(to_double(key, part));
    }
  }
  else if (key == "dt_over_epsilon") {
    if (value == "none") cfg.dt_over_epsilon.reset();
    else cfg.dt_over_epsilon = to_double(key, value);
  }
  else if (key == "T" || key == "horizon") cfg.horizon = to_double(key, value);
  else if (key == "stride") cfg.stride = to_int(key, value);
  else if (key == "sobolev" || key == "s") cfg.sobolev = to_double(key, value);
  else if (key == "check_monotone") cfg.check_monotone = to_bool(key, value);
  else if (key == "coupling_tol") cfg.coupling_tol = to_double(key, value);
  else if (key == "resonance_tol") cfg.resonance_tol = to_double(key, value);
  else if (key == "output_dir") cfg.output_dir = value;
  else throw ConfigError(fmt::format("unknown config key '{}'", key));
}

void ExperimentConfig::validate() const {
  if (sine_modes < 1) throw ConfigError("N must be >= 1");
  if (modes < 1 || modes > sine_modes) {
    throw ConfigError(fmt::format("M={} must lie in [1, N={}]", modes, sine_modes));
  }
  if (initial.empty()) throw ConfigError("initial state is empty");
  if (static_cast<int>(initial.size()) > modes) {
    for (std::size_t k = modes; k < initial.size(); ++k) {
      if (initial[k] != 0.0) {
        throw ConfigError(fmt::format(
            "initial state has a nonzero coefficient beyond M={}", modes));
      }
    }
  }
  double norm2 = 0.0;
  for (const auto& c : initial) norm2 += std::norm(c);
  if (!(norm2 > 0.0)) throw ConfigError("initial state is the zero vector");
  if (!(gain > 0.0)) throw ConfigError("gain k must be positive");
  if (gamma && !(*gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (!(horizon > 0.0)) throw ConfigError("T must be positive");
  if (stride < 1) throw ConfigError("stride must be >= 1");
  if (dt_over_epsilon && !(*dt_over_epsilon > 0.0 && *dt_over_epsilon <= 1.0)) {
    throw ConfigError("dt_over_epsilon must lie in (0, 1]");
  }
  for (double e : epsilons) {
    if (!(e > 0.0)) throw ConfigError("sweep epsilons must be positive");
    if (!dt_over_epsilon && dt > e) {
      throw ConfigError(fmt::format("dt={} exceeds sweep epsilon {}", dt, e));
    }
  }
  if (!(coupling_tol > 0.0) || !(resonance_tol > 0.0)) {
    throw ConfigError("hypothesis tolerances must be positive");
  }
  integrator_spec(*this).validate();
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::to_key_values() const {
  std::vector<std::pair<std::string, std::string>> kv{
      {"name", name},
      {"potential", potential},
      {"q1", q1},
      {"q2", q2},
      {"N", std::to_string(sine_modes)},
      {"M", std::to_string(modes)},
      {"initial", format_complex_list(initial)},
      {"gain", num(gain)},
      {"gamma", gamma ? num(*gamma) : "auto"},
      {"gamma_target", num(gamma_target)},
      {"damping", to_string(damping)},
      {"method", to_string(method)},
      {"feedback_sampling", to_string(sampling)},
      {"dt", num(dt)},
      {"epsilon", num(epsilon)},
      {"epsilons", format_list(epsilons)},
      {"dt_over_epsilon", dt_over_epsilon ? num(*dt_over_epsilon) : "none"},
      {"T", num(horizon)},
      {"stride", std::to_string(stride)},
      {"sobolev", num(sobolev)},
      {"check_monotone", check_monotone ? "true" : "false"},
      {"coupling_tol", num(coupling_tol)},
      {"resonance_tol", num(resonance_tol)},
      {"output_dir", output_dir},
  };
  return kv;
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : to_key_values()) out += k + " = " + v + "\n";
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> settings;
  std::optional<std::string> preset_name;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value'", line_no));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(fmt::format("line {}: empty key", line_no));
    if (!seen.insert(key).second) {
      throw ConfigError(fmt::format("line {}: duplicate key '{}'", line_no, key));
    }
    if (key == "preset") preset_name = value;
    else settings.emplace_back(key, value);
  }
  ExperimentConfig cfg = preset_name ? preset(*preset_name) : ExperimentConfig{};
  for (const auto& [k, v] : settings) apply_setting(cfg, k, v);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::string> preset_names() {
  return {"fig1", "fig2", "fig3-4", "fig5-6", "hcn"};
}

ExperimentConfig preset(const std::string& name) {
  // Validation setting: V=(x-1/2)^2, Q1=x^2, Q2=x, N=50, M=5,
  // psi0=(phi1 + i phi2)/sqrt2, L(psi0)=3/4, eps=dt=1e-3, T=1000, s=1.8.
  ExperimentConfig fig1;
  fig1.name = "fig1";
  fig1.potential = "harmonic_centered";
  fig1.q1 = "x2";
  fig1.q2 = "x";
  fig1.sine_modes = 50;
  fig1.modes = 5;
  fig1.initial = {{1.0, 0.0}, {0.0, 1.0}};
  // The default k = 0.05 only reaches L(200)/L(0) ~ 0.64 on this setting.
  fig1.gain = 0.1;
  fig1.gamma_target = 0.75;
  fig1.dt = 1e-3;
  fig1.epsilon = 1e-3;
  fig1.horizon = 1000.0;
  fig1.stride = 100;
  fig1.sobolev = 1.8;

  if (name == "fig1") return fig1;
  if (name == "fig2") {
    ExperimentConfig c = fig1;
    c.name = "fig2";
    c.initial = {{1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    c.horizon = 5000.0;
    return c;
  }
  if (name == "fig3-4") {
    // Sweep with dt = eps. The ~30 final-gap ratio is quoted at T=500.
    ExperimentConfig c = fig1;
    c.name = "fig3-4";
    c.epsilons = {1e-3, 1e-4};
    c.dt_over_epsilon = 1.0;
    c.dt = 1e-4;
    c.epsilon = 1e-4;
    c.horizon = 500.0;
    return c;
  }
  if (name == "fig5-6") {
    // HCN-inspired moments; T=1000 here against 500 for fig3-4.
    ExperimentConfig c = preset("fig3-4");
    c.name = "fig5-6";
    c.q1 = "cosx";
    c.q2 = "cos2x";
    c.horizon = 1000.0;
    return c;
  }
  if (name == "hcn") {
    ExperimentConfig c = fig1;
    c.name = "hcn";
    c.q1 = "cosx";
    c.q2 = "cos2x";
    return c;
  }
  throw ConfigError(fmt::format("unknown preset '{}'", name));
}

IntegratorSpec integrator_spec(const ExperimentConfig& cfg) {
  IntegratorSpec spec;
  spec.method = cfg.method;
  spec.dt = cfg.dt;
  spec.epsilon = cfg.epsilon;
  spec.sampling = cfg.sampling;
  return spec;
}

RunControl run_control(const ExperimentConfig& cfg) {
  RunControl control;
  control.horizon = cfg.horizon;
  control.stride = cfg.stride;
  control.sobolev_order = cfg.sobolev;
  control.check_monotone = cfg.check_monotone;
  return control;
}

namespace {

void fill_run_fields(Problem& p) {
  const ExperimentConfig& cfg = p.config;
  const int m = p.ops.modes();
  p.x0 = ModeVector::Zero(m);
  for (int k = 0; k < m && k < static_cast<int>(cfg.initial.size()); ++k) {
    p.x0(k) = cfg.initial[k];
  }
  p.x0.normalize();
  p.params.gain = cfg.gain;
  p.params.damping = cfg.damping;
  p.params.gamma = cfg.gamma ? *cfg.gamma : gamma_for_target(p.x0, p.ops, cfg.gamma_target);
}

}  // namespace

Problem resolve(const ExperimentConfig& cfg) {
  cfg.validate();
  Problem p;
  p.config = cfg;
  p.basis = build_basis(GridFunction::parse(cfg.potential),
                        SineBasisSpec{cfg.sine_modes}, cfg.modes);
  p.ops = build_operators(p.basis, GridFunction::parse(cfg.q1),
                          GridFunction::parse(cfg.q2));
  fill_run_fields(p);
  return p;
}

Problem with_run_config(const Problem& base, const ExperimentConfig& cfg) {
  if (cfg.potential != base.config.potential || cfg.q1 != base.config.q1 ||
      cfg.q2 != base.config.q2 || cfg.modes != base.config.modes ||
      cfg.sine_modes != base.config.sine_modes) {
    throw ConfigError("with_run_config: physical setting differs from base");
  }
  cfg.validate();
  Problem p;
  p.config = cfg;
  p.basis = base.basis;
  p.ops = base.ops;
  fill_run_fields(p);
  return p;
}

}  // namespace bilinq
