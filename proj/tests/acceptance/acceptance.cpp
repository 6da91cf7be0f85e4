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

// Acceptance suite. One line per criterion, exit status 1 if any fails.
// Tolerances are fixed here on purpose; do not tune them to the results.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "bilinq/config.hpp"
#include "bilinq/dynamics.hpp"
#include "bilinq/errors.hpp"
#include "bilinq/experiment.hpp"
#include "bilinq/hypotheses.hpp"
#include "bilinq/metrics.hpp"
#include "bilinq/operators.hpp"
#include "bilinq/spectral.hpp"

using namespace bilinq;
using cd = std::complex<double>;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ExperimentConfig validation_config() {
  ExperimentConfig cfg = preset("fig1");
  cfg.output_dir = "acceptance_out";
  return cfg;
}

// 1. spectrum of -Δ on the sine basis
Verdict spectral_exactness() {
  const auto t0 = Clock::now();
  const SpectralBasis basis = build_basis(GridFunction::parse("zero"), {50}, 10);
  const double elapsed = seconds_since(t0);
  double worst = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double exact = k * k * kPi * kPi;
    worst = std::max(worst, std::abs(basis.eigenvalues(k - 1) - exact) / exact);
  }
  return {worst < 1e-10 && elapsed < 1.0,
          fmt::format("max rel err {:.3e} (< 1e-10), build {:.3f} s (< 1 s)", worst,
                      elapsed)};
}

// 2. <x^2 2 sin^2(kπx)> = 1/3 - 1/(2 k^2 π^2)
Verdict quadrature_oracle() {
  double worst = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double got = integrate([k](double x) {
      const double s = std::sin(k * kPi * x);
      return x * x * 2.0 * s * s;
    });
    const double exact = 1.0 / 3.0 - 1.0 / (2.0 * k * k * kPi * kPi);
    worst = std::max(worst, std::abs(got - exact));
  }
  return {worst < 1e-10, fmt::format("max abs err {:.3e} (< 1e-10)", worst)};
}

// 3. e1 is an equilibrium of the closed loop
Verdict ground_state_equilibrium() {
  ExperimentConfig cfg = validation_config();
  cfg.initial = {{1.0, 0.0}};
  cfg.gamma = 1.0;
  cfg.horizon = 10.0;
  cfg.stride = 1;
  const Problem pb = resolve(cfg);
  double u = 0.0, l = 0.0, dist = 0.0;
  std::int64_t rows = 0;
  const RunOutcome out = simulate(pb.ops, pb.params, integrator_spec(cfg), pb.x0,
                                  run_control(cfg), [&](const TrajectoryRow& r) {
                                    ++rows;
                                    u = std::max({u, std::abs(r.u), std::abs(r.alpha),
                                                  std::abs(r.beta)});
                                    l = std::max(l, std::abs(r.lyapunov_av));
                                    dist = std::max({dist, r.dist_av, r.dist_eps});
                                  });
  const bool pass = !out.aborted && rows == 10001 && u < 1e-12 && l < 1e-12 && dist < 1e-9;
  return {pass, fmt::format("rows {}, sup|u| {:.3e}, sup|L| {:.3e}, sup dist {:.3e}",
                            rows, u, l, dist)};
}

// 4. unitary stepping keeps both states on the sphere
Verdict norm_conservation() {
  ExperimentConfig cfg = validation_config();
  cfg.horizon = 100.0;
  cfg.stride = 1;
  const Problem pb = resolve(cfg);
  RunControl rc = run_control(cfg);
  rc.check_monotone = false;
  double drift_eps = 0.0, drift_av = 0.0;
  const RunOutcome out =
      simulate(pb.ops, pb.params, integrator_spec(cfg), pb.x0, rc,
               [&](const TrajectoryRow& r) {
                 drift_eps = std::max(drift_eps, r.drift_eps);
                 drift_av = std::max(drift_av, r.drift_av);
               });
  drift_eps = std::max(drift_eps, std::abs(out.final_state.x_eps.norm() - 1.0));
  drift_av = std::max(drift_av, std::abs(out.final_state.x_av.norm() - 1.0));
  const bool pass = !out.aborted && out.steps == 100000 && drift_eps < 1e-9 &&
                    drift_av < 1e-9;
  return {pass, fmt::format("steps {}, max drift osc {:.3e}, av {:.3e} (< 1e-9)",
                            out.steps, drift_eps, drift_av)};
}

// 5. L non-increasing along the averaged trajectory
Verdict lyapunov_monotonicity() {
  ExperimentConfig cfg = validation_config();
  cfg.horizon = 200.0;
  cfg.stride = 1;
  const Problem pb = resolve(cfg);
  RunControl rc = run_control(cfg);
  rc.check_monotone = false;  // measured here instead of aborting
  double prev = std::nan(""), first = 0.0, last = 0.0, worst_rise = -1.0;
  std::int64_t rises = 0;
  const RunOutcome out = simulate(pb.ops, pb.params, integrator_spec(cfg), pb.x0, rc,
                                  [&](const TrajectoryRow& r) {
                                    if (std::isnan(prev)) {
                                      first = r.lyapunov_av;
                                    } else {
                                      const double rise = r.lyapunov_av - prev;
                                      worst_rise = std::max(worst_rise, rise);
                                      if (rise > 1e-8) ++rises;
                                    }
                                    prev = last = r.lyapunov_av;
                                  });
  const double ratio = last / first;
  const bool pass = !out.aborted && rises == 0 && std::abs(first - 0.75) < 1e-12 &&
                    last < first && ratio < 0.5;
  return {pass, fmt::format("L(0) {:.15g}, L(200) {:.6f}, ratio {:.4f} (< 0.5), "
                            "max step rise {:.3e}, rises > 1e-8: {}",
                            first, last, ratio, worst_rise, rises)};
}

// 6. central difference of L against the closed-form rate
double derivative_identity_error(const Problem& pb, double dt) {
  const IntegratorSpec spec{Method::strang, dt, 0.0, FeedbackSampling::midpoint};
  LockstepIntegrator integ(pb.ops, pb.params, spec);
  const std::int64_t per_sample = std::llround(0.1 / dt);
  const std::int64_t last = 100 * per_sample + 1;
  LockstepState s;
  s.x_av = pb.x0;
  s.x_eps = pb.x0;
  double l_prev = lyapunov(s.x_av, pb.ops, pb.params);
  double err = 0.0, scale = 0.0;
  for (std::int64_t n = 0; n < last; ++n) {
    LockstepState next = integ.step(s);
    next.t = (n + 1) * dt;
    if (n > 0 && n % per_sample == 0) {
      const double l_next = lyapunov(next.x_av, pb.ops, pb.params);
      const double fd = (l_next - l_prev) / (2.0 * dt);
      const double rate =
          lyapunov_rate(evaluate_feedback(s.x_av, pb.ops, pb.params), pb.params);
      err = std::max(err, std::abs(fd - rate));
      scale = std::max(scale, std::abs(rate));
    }
    l_prev = lyapunov(s.x_av, pb.ops, pb.params);
    s = std::move(next);
  }
  return err / scale;
}

Verdict derivative_identity() {
  const Problem pb = resolve(validation_config());
  const double coarse = derivative_identity_error(pb, 1e-4);
  const double fine = derivative_identity_error(pb, 5e-5);
  return {coarse < 1e-2 && fine < coarse,
          fmt::format("normalised sup err dt=1e-4 {:.3e} (< 1e-2), dt=5e-5 {:.3e} "
                      "(must improve, ratio {:.2f})",
                      coarse, fine, coarse / fine)};
}

// 7. gap between the oscillating and averaged systems scales with ε
Verdict averaging_law() {
  ExperimentConfig cfg = validation_config();
  cfg.name = "accept_averaging";
  cfg.horizon = 50.0;
  cfg.epsilons = {1e-3, 2e-4, 1e-4};
  cfg.dt_over_epsilon = 0.1;
  cfg.dt = 1e-5;
  cfg.epsilon = 1e-4;
  cfg.stride = 50000;
  const auto t0 = Clock::now();
  const SweepSummary sweep = run_sweep(cfg);
  const double elapsed = seconds_since(t0);
  bool ok = sweep.entries.size() == 3;
  for (const auto& e : sweep.entries) ok = ok && e.error.empty() && !e.aborted;
  if (!ok) return {false, "sweep run failed"};
  const auto& e = sweep.entries;
  const bool decreasing =
      e[0].sup_gap_h2 > e[1].sup_gap_h2 && e[1].sup_gap_h2 > e[2].sup_gap_h2;
  const double sup_ratio = *sweep.sup_ratio(1e-3, 1e-4);
  const double final_ratio = *sweep.final_ratio(1e-3, 1e-4);
  const bool sup_ok = sup_ratio >= 5.0 && sup_ratio <= 100.0;
  const bool final_ok = final_ratio >= 10.0 && final_ratio <= 100.0;
  const bool time_ok = elapsed < 600.0;
  return {decreasing && sup_ok && final_ok && time_ok,
          fmt::format("sup gap {:.3e} / {:.3e} / {:.3e} decreasing={}; sup ratio {:.2f} "
                      "in [5,100]={}; final gap {:.3e} / {:.3e} ratio {:.1f} in "
                      "[10,100]={}; {:.1f} s (< 600)",
                      e[0].sup_gap_h2, e[1].sup_gap_h2, e[2].sup_gap_h2, decreasing,
                      sup_ratio, sup_ok, e[0].final_gap_h2, e[2].final_gap_h2,
                      final_ratio, final_ok, elapsed)};
}

// 8. Euler vs Strang, and Strang self-convergence
LockstepState integrate_to(const Problem& pb, Method method, double dt, double horizon) {
  const IntegratorSpec spec{method, dt, pb.config.epsilon, FeedbackSampling::midpoint};
  RunControl rc;
  rc.horizon = horizon;
  rc.stride = static_cast<int>(step_count(horizon, dt));
  rc.sobolev_order = pb.config.sobolev;
  rc.check_monotone = false;
  const RunOutcome out = simulate(pb.ops, pb.params, spec, pb.x0, rc, nullptr);
  if (out.aborted) throw NumericalError("run aborted: " + out.diagnostic);
  return out.final_state;
}

Verdict integrator_cross_oracle() {
  const Problem pb = resolve(validation_config());
  const LockstepState euler = integrate_to(pb, Method::euler, 1e-5, 1.0);
  const LockstepState s1 = integrate_to(pb, Method::strang, 1e-3, 1.0);
  const LockstepState s2 = integrate_to(pb, Method::strang, 5e-4, 1.0);
  const LockstepState s4 = integrate_to(pb, Method::strang, 2.5e-4, 1.0);
  const auto& lam = pb.ops.lambda;
  const double cross = std::max(h2_gap(euler.x_av, s1.x_av, lam),
                                h2_gap(euler.x_eps, s1.x_eps, lam));
  const double order_av = std::log2(h2_gap(s1.x_av, s2.x_av, lam) /
                                    h2_gap(s2.x_av, s4.x_av, lam));
  const double order_eps = std::log2(h2_gap(s1.x_eps, s2.x_eps, lam) /
                                     h2_gap(s2.x_eps, s4.x_eps, lam));
  const bool cross_ok = cross < 1e-3;
  const bool order_ok = std::min(order_av, order_eps) >= 1.9;
  return {cross_ok && order_ok,
          fmt::format("Euler(1e-5) vs Strang(1e-3) H2 gap {:.3e} (< 1e-3)={}; Strang "
                      "order av {:.3f}, osc {:.3f} (>= 1.9)={}",
                      cross, cross_ok, order_av, order_eps, order_ok)};
}

// 9. truncation level M=5 vs M=10
Verdict mode_refinement() {
  ExperimentConfig cfg = validation_config();
  cfg.name = "accept_refine";
  cfg.horizon = 100.0;
  cfg.stride = 100;
  const RefinementSummary r = refinement_check(cfg, {5, 10});
  for (const auto& run : r.runs) {
    if (run.outcome.aborted) return {false, "run aborted: " + run.outcome.diagnostic};
  }
  const double dl = r.sup_lyapunov_diff.at(1);
  return {dl < 1e-2, fmt::format("sup |dL| {:.3e} (< 1e-2), sup |d dist_av| {:.3e}", dl,
                                 r.sup_dist_av_diff.at(1))};
}

// 10. hypotheses checker on known cases
Verdict hypotheses_checker() {
  const SpectralBasis free = build_basis(GridFunction::parse("zero"), {50}, 8);
  const ControlOperators free_ops =
      build_operators(free, GridFunction::parse("x2"), GridFunction::parse("x"));
  const CouplingReport resonant = check_hypotheses(free, free_ops, {});

  const SpectralBasis basis =
      build_basis(GridFunction::parse("harmonic_centered"), {50}, 8);
  const ControlOperators flat =
      build_operators(basis, GridFunction::parse("one"), GridFunction::parse("x"));
  const CouplingReport flat_report = check_hypotheses(basis, flat, {});
  std::vector<int> expected;
  for (int k = 2; k <= 8; ++k) expected.push_back(k);

  const bool pass = !resonant.resonance_violations.empty() && flat_report.j0 == expected &&
                    flat_report.j_neq0.empty();
  std::string first = "none";
  if (!resonant.resonance_violations.empty()) {
    const auto& v = resonant.resonance_violations.front();
    first = fmt::format("(k={},p={},q={})", v.k, v.p, v.q);
  }
  return {pass, fmt::format("V=0 M=8: {} violations, first {}; Q1=1: |J0| = {} of 7",
                            resonant.resonance_violations.size(), first,
                            flat_report.j0.size())};
}

// 11. sign structure and phase invariance of the feedback
Verdict feedback_properties() {
  const Problem pb = resolve(validation_config());
  const int m = pb.ops.modes();
  int bad_sign = 0, bad_zero = 0, bad_alpha = 0, bad_phase = 0;
  double worst_phase = 0.0;
  for (Damping d : {Damping::clip, Damping::smooth}) {
    FeedbackParams p = pb.params;
    p.damping = d;
    for (int n = 0; n < 1000; ++n) {
      ModeVector x(m);
      for (int k = 0; k < m; ++k) {
        // Weyl sequence on the torus, one frequency per (mode, part).
        const double a = std::fmod((n + 1) * std::sqrt(2.0 + 2 * k), 1.0);
        const double b = std::fmod((n + 1) * std::sqrt(3.0 + 2 * k), 1.0);
        x(k) = cd(2.0 * a - 1.0, 2.0 * b - 1.0);
      }
      x /= x.norm();
      const FeedbackValues f = evaluate_feedback(x, pb.ops, p);
      if (!(f.beta >= 0.0)) ++bad_sign;
      if ((f.beta == 0.0) != (f.i2 >= 0.0)) ++bad_zero;
      if (f.alpha != -p.gain * f.i1) ++bad_alpha;
      const double theta = 2.0 * kPi * std::fmod(0.618033988749895 * (n + 1), 1.0);
      const FeedbackValues g = evaluate_feedback(std::polar(1.0, theta) * x, pb.ops, p);
      const double dev = std::max({std::abs(f.i1 - g.i1), std::abs(f.i2 - g.i2),
                                   std::abs(f.alpha - g.alpha),
                                   std::abs(f.beta - g.beta)});
      worst_phase = std::max(worst_phase, dev);
      if (dev > 1e-12) ++bad_phase;
    }
  }
  const bool pass = bad_sign + bad_zero + bad_alpha + bad_phase == 0;
  return {pass, fmt::format("2x1000 states: beta<0 {}, zero-set mismatch {}, "
                            "alpha != -k I1 {}, phase dev max {:.3e} ({} > 1e-12)",
                            bad_sign, bad_zero, bad_alpha, worst_phase, bad_phase)};
}

// 12. identical config, identical bytes
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict determinism() {
  std::vector<std::string> differing;
  std::size_t checked = 0;
  for (const std::string& name : preset_names()) {
    ExperimentConfig cfg = preset(name);
    cfg.output_dir = "acceptance_out";
    cfg.horizon = 2.0;
    cfg.stride = 50;
    const std::filesystem::path dir = output_directory(cfg);
    const Problem pb = resolve(cfg);
    const RunResult a = run_experiment(pb, dir, "accept_det_" + name + "_a");
    const RunResult b = run_experiment(pb, dir, "accept_det_" + name + "_b");
    const std::string bytes = slurp(a.csv);
    if (bytes.empty() || bytes != slurp(b.csv)) differing.push_back(name);
    ++checked;
  }
  return {differing.empty() && checked == preset_names().size(),
          fmt::format("{} presets, {} differing{}", checked, differing.size(),
                      differing.empty() ? "" : ": " + fmt::format("{}", differing.front()))};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"spectral exactness", spectral_exactness},
      {"quadrature oracle", quadrature_oracle},
      {"ground-state equilibrium", ground_state_equilibrium},
      {"norm conservation", norm_conservation},
      {"lyapunov monotonicity", lyapunov_monotonicity},
      {"derivative identity", derivative_identity},
      {"averaging law", averaging_law},
      {"integrator cross-oracle", integrator_cross_oracle},
      {"mode refinement", mode_refinement},
      {"hypotheses checker", hypotheses_checker},
      {"feedback sign properties", feedback_properties},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    const auto t0 = Clock::now();
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("[%s] %2zu %-26s %s  (%.1f s)\n", v.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), v.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
