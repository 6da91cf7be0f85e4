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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bilinq/config.hpp"
#include "bilinq/dynamics.hpp"

namespace bilinq {

inline constexpr const char* kCodeVersion = "bilinq 0.1.0";
inline constexpr const char* kTrajectorySchema = "bilinq-trajectory/1";

/// CSV column order of a trajectory file.
const std::vector<std::string>& trajectory_columns();

/// Output directory: $BILINQ_OUTPUT_DIR when set, else cfg.output_dir.
std::filesystem::path output_directory(const ExperimentConfig& cfg);

struct RunResult {
  std::filesystem::path csv;
  std::filesystem::path meta;
  RunOutcome outcome;
  double sup_gap_h2 = 0.0;    ///< Over recorded rows.
  double final_gap_h2 = 0.0;
  std::vector<TrajectoryRow> rows;  ///< Filled when requested.
};

/// Header sidecar content: resolved config, spectrum, γ, version, outcome.
nlohmann::json run_header(const Problem& problem, const RunOutcome& outcome);

/// Runs one lockstep experiment and writes `<stem>.csv` and
/// `<stem>.meta.json` into `dir`. Both files go through a temporary name and
/// a rename; an aborted run keeps its rows and is flagged in the sidecar.
RunResult run_experiment(const Problem& problem,
                         const std::filesystem::path& dir,
                         const std::string& stem, bool keep_rows = false);

/// Resolves the config and writes into output_directory(cfg) / cfg.name.
RunResult run_experiment(const ExperimentConfig& cfg, bool keep_rows = false);

struct SweepEntry {
  double epsilon = 0.0;
  double dt = 0.0;
  double sup_gap_h2 = 0.0;    ///< Sup over every integration step.
  double final_gap_h2 = 0.0;
  bool aborted = false;
  std::string error;          ///< Config/numerical failure or monitor text.
  std::filesystem::path csv;
};

struct SweepSummary {
  std::vector<SweepEntry> entries;
  /// gap(ε_i) / gap(ε_{i+1}) for consecutive entries, empty on failure.
  std::vector<std::optional<double>> sup_ratios;
  std::vector<std::optional<double>> final_ratios;
  std::filesystem::path summary_csv;

  std::optional<double> final_ratio(double eps_a, double eps_b) const;
  std::optional<double> sup_ratio(double eps_a, double eps_b) const;
};

/// One lockstep run per ε in cfg.epsilons (dt = dt_over_epsilon * ε when
/// set). Runs share the basis and operators and execute concurrently; a
/// failing run is recorded in its entry without affecting the others.
SweepSummary run_sweep(const ExperimentConfig& cfg);

struct RefinementSummary {
  std::vector<int> modes;
  /// sup_t |L^{M_0}(t) - L^{M_i}(t)| etc., index-aligned with `modes`
  /// (entry 0 compares the first run with itself).
  std::vector<double> sup_lyapunov_diff;
  std::vector<double> sup_dist_av_diff;
  std::vector<double> sup_dist_eps_diff;
  std::vector<RunResult> runs;
};

/// Repeats the experiment at each M and compares the recorded curves.
RefinementSummary refinement_check(const ExperimentConfig& cfg,
                                   const std::vector<int>& modes);

/// Splits a trajectory CSV into two-column series files next to it:
/// `<stem>_lyapunov.dat`, `<stem>_dist_av.dat`, `<stem>_dist_eps.dat`,
/// `<stem>_gap_h2.dat`. Throws ConfigError when a needed column is missing.
std::vector<std::filesystem::path> export_plotdata(
    const std::filesystem::path& csv);

/// Atomically writes text to a path (temp file + rename).
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);

}  // namespace bilinq
