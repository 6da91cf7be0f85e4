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

#include "bilinq/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "bilinq/errors.hpp"

namespace fs = std::filesystem;

namespace bilinq {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string csv_line(const TrajectoryRow& r) {
  return fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                     r.t, r.lyapunov_av, r.dist_av, r.dist_eps, r.gap_h2, r.u,
                     r.alpha, r.beta, r.drift_eps, r.drift_av);
}

fs::path temp_path(const fs::path& path) {
  fs::path tmp = path;
  tmp += ".tmp";
  return tmp;
}

std::string epsilon_tag(double eps) { return fmt::format("{:g}", eps); }

}  // namespace

const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> columns{
      "t",     "L_av",  "dist_av", "dist_eps",       "gap_H2",
      "u",     "alpha", "beta",    "norm_drift_eps", "norm_drift_av"};
  return columns;
}

fs::path output_directory(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("BILINQ_OUTPUT_DIR"); env && *env) {
    return fs::path(env);
  }
  return fs::path(cfg.output_dir);
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = temp_path(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError(fmt::format("cannot write '{}'", tmp.string()));
    out << contents;
    if (!out) throw ConfigError(fmt::format("write failed for '{}'", tmp.string()));
  }
  fs::rename(tmp, path);
}

nlohmann::json run_header(const Problem& problem, const RunOutcome& outcome) {
  nlohmann::json h;
  h["schema"] = kTrajectorySchema;
  h["code_version"] = kCodeVersion;
  nlohmann::json config = nlohmann::json::object();
  for (const auto& [k, v] : problem.config.to_key_values()) config[k] = v;
  h["config"] = config;
  h["columns"] = trajectory_columns();
  std::vector<double> lambda(problem.ops.lambda.data(),
                             problem.ops.lambda.data() + problem.ops.lambda.size());
  h["eigenvalues"] = lambda;
  h["gamma"] = problem.params.gamma;
  h["gain"] = problem.params.gain;
  h["steps"] = outcome.steps;
  h["rows"] = outcome.rows;
  h["aborted"] = outcome.aborted;
  h["monitor"] = outcome.monitor;
  h["diagnostic"] = outcome.diagnostic;
  h["sup_gap_h2"] = outcome.sup_gap_h2;
  h["final_gap_h2"] = outcome.final_gap_h2;
  return h;
}

RunResult run_experiment(const Problem& problem, const fs::path& dir,
                         const std::string& stem, bool keep_rows) {
  fs::create_directories(dir);
  RunResult result;
  result.csv = dir / (stem + ".csv");
  result.meta = dir / (stem + ".meta.json");

  const fs::path tmp = temp_path(result.csv);
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", tmp.string()));
  {
    std::string header;
    for (const auto& c : trajectory_columns()) header += (header.empty() ? "" : ",") + c;
    out << header << '\n';
  }

  const auto sink = [&](const TrajectoryRow& row) {
    out << csv_line(row);
    result.sup_gap_h2 = std::max(result.sup_gap_h2, row.gap_h2);
    result.final_gap_h2 = row.gap_h2;
    if (keep_rows) result.rows.push_back(row);
  };
  try {
    result.outcome = simulate(problem.ops, problem.params,
                              integrator_spec(problem.config),
                              problem.x0, run_control(problem.config), sink);
  } catch (...) {
    out.close();
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
  out.close();
  if (!out) throw ConfigError(fmt::format("write failed for '{}'", tmp.string()));
  fs::rename(tmp, result.csv);
  write_file_atomic(result.meta, run_header(problem, result.outcome).dump(2) + "\n");
  return result;
}

RunResult run_experiment(const ExperimentConfig& cfg, bool keep_rows) {
  return run_experiment(resolve(cfg), output_directory(cfg), cfg.name, keep_rows);
}

// ---------------------------------------------------------------------------

namespace {

std::optional<double> ratio(const SweepEntry& a, double SweepEntry::*field,
                            const SweepEntry& b) {
  if (!a.error.empty() || !b.error.empty() || a.aborted || b.aborted) return std::nullopt;
  if (b.*field == 0.0) return std::nullopt;
  return a.*field / (b.*field);
}

const SweepEntry* find_entry(const std::vector<SweepEntry>& entries, double eps) {
  for (const auto& e : entries) {
    if (e.epsilon == eps) return &e;
  }
  return nullptr;
}

}  // namespace

std::optional<double> SweepSummary::final_ratio(double eps_a, double eps_b) const {
  const SweepEntry* a = find_entry(entries, eps_a);
  const SweepEntry* b = find_entry(entries, eps_b);
  if (!a || !b) return std::nullopt;
  return ratio(*a, &SweepEntry::final_gap_h2, *b);
}

std::optional<double> SweepSummary::sup_ratio(double eps_a, double eps_b) const {
  const SweepEntry* a = find_entry(entries, eps_a);
  const SweepEntry* b = find_entry(entries, eps_b);
  if (!a || !b) return std::nullopt;
  return ratio(*a, &SweepEntry::sup_gap_h2, *b);
}

SweepSummary run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.epsilons.size() < 2) {
    throw ConfigError("a sweep needs at least two epsilon values");
  }
  const Problem base = resolve(cfg);
  const fs::path dir = output_directory(cfg);

  const auto run_one = [&](double eps) {
    SweepEntry entry;
    entry.epsilon = eps;
    try {
      ExperimentConfig c = cfg;
      c.epsilon = eps;
      c.dt = cfg.dt_over_epsilon ? *cfg.dt_over_epsilon * eps : cfg.dt;
      c.epsilons.clear();
      entry.dt = c.dt;
      const Problem p = with_run_config(base, c);
      const RunResult r =
          run_experiment(p, dir, cfg.name + "_eps" + epsilon_tag(eps));
      entry.csv = r.csv;
      entry.sup_gap_h2 = r.outcome.sup_gap_h2;
      entry.final_gap_h2 = r.outcome.final_gap_h2;
      entry.aborted = r.outcome.aborted;
      if (r.outcome.aborted) entry.error = r.outcome.diagnostic;
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    return entry;
  };

  // Identical ε values would race on the same output file; run each once.
  std::vector<double> unique;
  for (double e : cfg.epsilons) {
    if (std::find(unique.begin(), unique.end(), e) == unique.end()) unique.push_back(e);
  }
  std::map<double, SweepEntry> done;
  const std::size_t workers =
      std::max<std::size_t>(1, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < unique.size(); start += workers) {
    std::vector<std::future<SweepEntry>> batch;
    for (std::size_t i = start; i < std::min(unique.size(), start + workers); ++i) {
      batch.push_back(std::async(std::launch::async, run_one, unique[i]));
    }
    for (auto& f : batch) {
      SweepEntry e = f.get();
      done.emplace(e.epsilon, std::move(e));
    }
  }

  SweepSummary summary;
  for (double e : cfg.epsilons) summary.entries.push_back(done.at(e));
  for (std::size_t i = 0; i + 1 < summary.entries.size(); ++i) {
    const auto& a = summary.entries[i];
    const auto& b = summary.entries[i + 1];
    summary.sup_ratios.push_back(ratio(a, &SweepEntry::sup_gap_h2, b));
    summary.final_ratios.push_back(ratio(a, &SweepEntry::final_gap_h2, b));
  }

  std::string table = "epsilon,dt,sup_gap_H2,final_gap_H2,sup_ratio_next,final_ratio_next,status\n";
  for (std::size_t i = 0; i < summary.entries.size(); ++i) {
    const auto& e = summary.entries[i];
    const auto opt = [](const std::optional<double>& v) {
      return v ? fmt::format("{:.17g}", *v) : std::string();
    };
    const std::string sup = i < summary.sup_ratios.size() ? opt(summary.sup_ratios[i]) : "";
    const std::string fin = i < summary.final_ratios.size() ? opt(summary.final_ratios[i]) : "";
    std::string status = e.error.empty() ? "ok" : (e.aborted ? "aborted" : "failed");
    table += fmt::format("{},{},{},{},{},{},{}\n", num(e.epsilon), num(e.dt),
                         num(e.sup_gap_h2), num(e.final_gap_h2), sup, fin, status);
  }
  summary.summary_csv = dir / (cfg.name + "_sweep.csv");
  write_file_atomic(summary.summary_csv, table);
  return summary;
}

// ---------------------------------------------------------------------------

RefinementSummary refinement_check(const ExperimentConfig& cfg,
                                   const std::vector<int>& modes) {
  if (modes.size() < 2) throw ConfigError("refinement needs at least two M values");
  RefinementSummary summary;
  summary.modes = modes;
  const fs::path dir = output_directory(cfg);
  for (int m : modes) {
    ExperimentConfig c = cfg;
    c.modes = m;
    summary.runs.push_back(run_experiment(resolve(c), dir,
                                          fmt::format("{}_M{}", cfg.name, m),
                                          /*keep_rows=*/true));
  }
  const auto& ref = summary.runs.front().rows;
  for (const auto& run : summary.runs) {
    double dl = 0.0, dav = 0.0, deps = 0.0;
    const std::size_t n = std::min(ref.size(), run.rows.size());
    for (std::size_t i = 0; i < n; ++i) {
      dl = std::max(dl, std::abs(ref[i].lyapunov_av - run.rows[i].lyapunov_av));
      dav = std::max(dav, std::abs(ref[i].dist_av - run.rows[i].dist_av));
      deps = std::max(deps, std::abs(ref[i].dist_eps - run.rows[i].dist_eps));
    }
    summary.sup_lyapunov_diff.push_back(dl);
    summary.sup_dist_av_diff.push_back(dav);
    summary.sup_dist_eps_diff.push_back(deps);
  }
  return summary;
}

// ---------------------------------------------------------------------------

std::vector<fs::path> export_plotdata(const fs::path& csv) {
  std::ifstream in(csv);
  if (!in) throw ConfigError(fmt::format("cannot open record '{}'", csv.string()));
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("record is empty");

  std::map<std::string, std::size_t> index;
  {
    std::stringstream ss(line);
    std::string col;
    std::size_t i = 0;
    while (std::getline(ss, col, ',')) index[col] = i++;
  }
  struct Series {
    const char* column;
    const char* suffix;
    const char* label;
  };
  static const Series series[] = {
      {"L_av", "lyapunov", "Lyapunov function of the averaged system"},
      {"dist_av", "dist_av", "H^s distance to the ground state, averaged system"},
      {"dist_eps", "dist_eps", "H^s distance to the ground state, oscillating system"},
      {"gap_H2", "gap_h2", "H^2 gap between averaged and oscillating systems"},
  };
  if (!index.count("t")) throw ConfigError("record has no 't' column");
  for (const auto& s : series) {
    if (!index.count(s.column)) {
      throw ConfigError(fmt::format("record has no '{}' column", s.column));
    }
  }

  std::vector<std::string> bodies(std::size(series));
  for (std::size_t k = 0; k < std::size(series); ++k) {
    bodies[k] = fmt::format("# {}\n# t {}\n", series[k].label, series[k].column);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < index.size()) throw ConfigError("truncated record row");
    for (std::size_t k = 0; k < std::size(series); ++k) {
      bodies[k] += cells[index["t"]] + ' ' + cells[index[series[k].column]] + '\n';
    }
  }

  std::vector<fs::path> written;
  const fs::path stem = csv.parent_path() / csv.stem();
  for (std::size_t k = 0; k < std::size(series); ++k) {
    fs::path out = stem;
    out += std::string("_") + series[k].suffix + ".dat";
    write_file_atomic(out, bodies[k]);
    written.push_back(out);
  }
  return written;
}

}  // namespace bilinq
