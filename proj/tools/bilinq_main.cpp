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

// Command-line front end: run, sweep, refine, check-hypotheses, eig, export.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "bilinq/config.hpp"
#include "bilinq/errors.hpp"
#include "bilinq/experiment.hpp"
#include "bilinq/hypotheses.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kMonitorAbort = 2, kNumericalError = 3 };

// A config argument is either a file path or "preset:<name>".
bilinq::ExperimentConfig load(const std::string& source,
                              const std::vector<std::string>& overrides) {
  std::string text;
  if (source.rfind("preset:", 0) == 0) {
    text = "preset = " + source.substr(7) + "\n";
  } else {
    bilinq::ExperimentConfig cfg = bilinq::load_config(source);
    text = cfg.to_text();
  }
  bilinq::ExperimentConfig cfg = bilinq::parse_config(text);
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      throw bilinq::ConfigError(fmt::format("--set expects key=value, got '{}'", o));
    }
    bilinq::apply_setting(cfg, o.substr(0, eq), o.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

std::string opt_ratio(const std::optional<double>& r) {
  return r ? fmt::format("{:.6g}", *r) : "-";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov feedback and oscillating control of a bilinear 1-D Schrodinger equation"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> overrides;
  const auto add_config = [&](CLI::App* sub) {
    sub->add_option("config", config, "config file or preset:<name>")->required();
    sub->add_option("--set", overrides, "override a config key (key=value)");
  };

  auto* run = app.add_subcommand("run", "run one lockstep experiment");
  add_config(run);
  auto* sweep = app.add_subcommand("sweep", "run the experiment for each epsilon");
  add_config(sweep);
  auto* refine = app.add_subcommand("refine", "compare runs across mode counts");
  add_config(refine);
  std::vector<int> modes;
  refine->add_option("--modes", modes, "mode counts, e.g. 5,10")
      ->delimiter(',')
      ->required();
  auto* hyp = app.add_subcommand("check-hypotheses", "truncated coupling/resonance check");
  add_config(hyp);
  auto* eig = app.add_subcommand("eig", "print the retained spectrum");
  add_config(eig);
  auto* exp = app.add_subcommand("export", "split a trajectory into plot series");
  std::string record;
  exp->add_option("record", record, "trajectory CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*exp) {
      for (const auto& p : bilinq::export_plotdata(record)) std::cout << p.string() << '\n';
      return kOk;
    }
    const bilinq::ExperimentConfig cfg = load(config, overrides);

    if (*run) {
      const auto result = bilinq::run_experiment(cfg);
      std::cout << fmt::format("wrote {} ({} rows)\n", result.csv.string(),
                               result.outcome.rows);
      if (result.outcome.aborted) {
        std::cerr << "aborted: " << result.outcome.diagnostic << '\n';
        return kMonitorAbort;
      }
      return kOk;
    }
    if (*sweep) {
      const auto summary = bilinq::run_sweep(cfg);
      std::cout << fmt::format("{:>12} {:>12} {:>14} {:>14}  status\n", "epsilon", "dt",
                               "sup gap H2", "final gap H2");
      bool aborted = false;
      bool failed = false;
      for (const auto& e : summary.entries) {
        std::cout << fmt::format("{:>12.4g} {:>12.4g} {:>14.6e} {:>14.6e}  {}\n",
                                 e.epsilon, e.dt, e.sup_gap_h2, e.final_gap_h2,
                                 e.error.empty() ? "ok" : e.error);
        aborted |= e.aborted;
        failed |= !e.error.empty() && !e.aborted;
      }
      for (std::size_t i = 0; i < summary.final_ratios.size(); ++i) {
        std::cout << fmt::format("ratio eps={:g}/eps={:g}: sup {}  final {}\n",
                                 summary.entries[i].epsilon,
                                 summary.entries[i + 1].epsilon,
                                 opt_ratio(summary.sup_ratios[i]),
                                 opt_ratio(summary.final_ratios[i]));
      }
      std::cout << "summary: " << summary.summary_csv.string() << '\n';
      if (failed) return kNumericalError;
      return aborted ? kMonitorAbort : kOk;
    }
    if (*refine) {
      const auto summary = bilinq::refinement_check(cfg, modes);
      bool aborted = false;
      for (std::size_t i = 0; i < summary.modes.size(); ++i) {
        std::cout << fmt::format(
            "M={:>3}  sup|dL|={:.3e}  sup|d dist_av|={:.3e}  sup|d dist_eps|={:.3e}\n",
            summary.modes[i], summary.sup_lyapunov_diff[i], summary.sup_dist_av_diff[i],
            summary.sup_dist_eps_diff[i]);
        aborted |= summary.runs[i].outcome.aborted;
      }
      return aborted ? kMonitorAbort : kOk;
    }
    const bilinq::Problem problem = bilinq::resolve(cfg);
    if (*hyp) {
      const auto report = bilinq::check_hypotheses(
          problem.basis, problem.ops, {cfg.coupling_tol, cfg.resonance_tol});
      std::cout << bilinq::format_report(report) << '\n'
                << bilinq::summary_json(report) << '\n';
      return kOk;
    }
    if (*eig) {
      std::cout << fmt::format("# potential={} N={} M={}\n", cfg.potential,
                               cfg.sine_modes, cfg.modes);
      for (int k = 0; k < problem.basis.retained(); ++k) {
        std::cout << fmt::format("{} {:.17g}\n", k + 1, problem.basis.eigenvalues(k));
      }
      if (problem.basis.degenerate) std::cout << "# warning: degenerate eigenvalues\n";
      return kOk;
    }
  } catch (const bilinq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const bilinq::MonitorAbort& e) {
    std::cerr << "monitor abort: " << e.what() << '\n';
    return kMonitorAbort;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  }
  return kOk;
}
