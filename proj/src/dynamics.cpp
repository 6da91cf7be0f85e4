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

#include "bilinq/dynamics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "bilinq/errors.hpp"
#include "bilinq/metrics.hpp"

namespace bilinq {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// x_k <- exp(-i λ_k dt) x_k
void free_flow(ModeVector& x, const Eigen::VectorXd& lambda, double dt) {
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    x(k) *= std::polar(1.0, -lambda(k) * dt);
  }
}

double renormalize(ModeVector& x) {
  const double n = x.norm();
  x /= n;
  return std::abs(n - 1.0);
}

}  // namespace

std::string to_string(Method m) { return m == Method::euler ? "euler" : "strang"; }

Method parse_method(const std::string& s) {
  if (s == "euler") return Method::euler;
  if (s == "strang") return Method::strang;
  throw ConfigError(fmt::format("unknown method '{}' (euler|strang)", s));
}

std::string to_string(FeedbackSampling s) {
  return s == FeedbackSampling::step_start ? "step_start" : "midpoint";
}

FeedbackSampling parse_sampling(const std::string& s) {
  if (s == "step_start") return FeedbackSampling::step_start;
  if (s == "midpoint") return FeedbackSampling::midpoint;
  throw ConfigError(
      fmt::format("unknown feedback sampling '{}' (step_start|midpoint)", s));
}

void IntegratorSpec::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError(fmt::format("dt must be positive, got {}", dt));
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError(fmt::format("epsilon must be >= 0, got {}", epsilon));
  }
  if (epsilon > 0.0 && dt > epsilon * (1.0 + 1e-12)) {
    throw ConfigError(fmt::format(
        "dt={} exceeds epsilon={}; the fast oscillation would be unresolved",
        dt, epsilon));
  }
}

ModeVector averaged_rhs(const ModeVector& x_av, const ControlOperators& ops,
                        const FeedbackParams& p) {
  const FeedbackValues f = evaluate_feedback(x_av, ops, p);
  const ModeVector hx = ops.lambda.cwiseProduct(x_av) + f.alpha * (ops.h1 * x_av) +
                        f.averaged_h2_coefficient() * (ops.h2 * x_av);
  return -kI * hx;
}

ModeVector oscillating_rhs(const ModeVector& x_eps, double u,
                           const ControlOperators& ops) {
  const ModeVector hx = ops.lambda.cwiseProduct(x_eps) + u * (ops.h1 * x_eps) +
                        u * u * (ops.h2 * x_eps);
  return -kI * hx;
}

double control_value(double t, const FeedbackValues& f, double epsilon) {
  return f.alpha + f.beta * std::sin(t / epsilon);
}

double control_value(double t, const ModeVector& x_av, double epsilon,
                     const ControlOperators& ops, const FeedbackParams& p) {
  return control_value(t, evaluate_feedback(x_av, ops, p), epsilon);
}

// ---------------------------------------------------------------------------

ControlPropagator::ControlPropagator(const ControlOperators& ops) : ops_(&ops) {}

void ControlPropagator::apply(double a, double b, double dt, ModeVector& x) {
  const bool hit = cached_ && dt == dt_ && std::abs(a - a_) <= 1e-14 &&
                   std::abs(b - b_) <= 1e-14;
  if (!hit) {
    a_ = a;
    b_ = b;
    dt_ = dt;
    cached_ = true;
    zero_ = a == 0.0 && b == 0.0;
    if (!zero_) {
      const Eigen::MatrixXd generator = a * ops_->h1 + b * ops_->h2;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(generator);
      if (solver.info() != Eigen::Success) {
        throw NumericalError("control propagator: eigendecomposition failed");
      }
      vectors_ = solver.eigenvectors();
      phases_.resize(solver.eigenvalues().size());
      for (Eigen::Index k = 0; k < phases_.size(); ++k) {
        phases_(k) = std::polar(1.0, -solver.eigenvalues()(k) * dt);
      }
    }
  }
  if (zero_) return;
  const ModeVector y = phases_.cwiseProduct(vectors_.transpose() * x);
  x = vectors_ * y;
}

// ---------------------------------------------------------------------------

LockstepIntegrator::LockstepIntegrator(const ControlOperators& ops,
                                       const FeedbackParams& params,
                                       const IntegratorSpec& spec)
    : ops_(ops),
      params_(params),
      spec_(spec),
      predictor_(ops),
      averaged_(ops),
      oscillating_(ops) {
  spec_.validate();
}

LockstepState LockstepIntegrator::step(const LockstepState& s) {
  return spec_.method == Method::euler ? step_euler(s) : step_strang(s);
}

LockstepState LockstepIntegrator::step_euler(const LockstepState& s) {
  const double dt = spec_.dt;
  start_ = evaluate_feedback(s.x_av, ops_, params_);
  LockstepState next;
  next.t = s.t + dt;

  const ModeVector rhs_av =
      -kI * (ops_.lambda.cwiseProduct(s.x_av) + start_.alpha * (ops_.h1 * s.x_av) +
             start_.averaged_h2_coefficient() * (ops_.h2 * s.x_av));
  next.x_av = s.x_av + dt * rhs_av;
  next.drift_av = renormalize(next.x_av);

  if (spec_.epsilon > 0.0) {
    const double u = control_value(s.t, start_, spec_.epsilon);
    next.x_eps = s.x_eps + dt * oscillating_rhs(s.x_eps, u, ops_);
    next.drift_eps = renormalize(next.x_eps);
  } else {
    next.x_eps = next.x_av;
    next.drift_eps = next.drift_av;
  }
  return next;
}

void LockstepIntegrator::strang_substep(ModeVector& x, double a, double b,
                                        double dt,
                                        ControlPropagator& propagator) {
  free_flow(x, ops_.lambda, 0.5 * dt);
  propagator.apply(a, b, dt, x);
  free_flow(x, ops_.lambda, 0.5 * dt);
}

LockstepState LockstepIntegrator::step_strang(const LockstepState& s) {
  const double dt = spec_.dt;
  start_ = evaluate_feedback(s.x_av, ops_, params_);
  FeedbackValues drive = start_;
  if (spec_.sampling == FeedbackSampling::midpoint) {
    ModeVector half = s.x_av;
    strang_substep(half, start_.alpha, start_.averaged_h2_coefficient(),
                   0.5 * dt, predictor_);
    drive = evaluate_feedback(half, ops_, params_);
  }

  LockstepState next;
  next.t = s.t + dt;
  next.x_av = s.x_av;
  strang_substep(next.x_av, drive.alpha, drive.averaged_h2_coefficient(), dt,
                 averaged_);
  next.drift_av = std::abs(next.x_av.norm() - 1.0);

  if (spec_.epsilon > 0.0) {
    const double u = control_value(s.t + 0.5 * dt, drive, spec_.epsilon);
    next.x_eps = s.x_eps;
    strang_substep(next.x_eps, u, u * u, dt, oscillating_);
    next.drift_eps = std::abs(next.x_eps.norm() - 1.0);
  } else {
    next.x_eps = next.x_av;
    next.drift_eps = next.drift_av;
  }
  return next;
}

LockstepState step_euler(const LockstepState& s, const IntegratorSpec& spec,
                         const ControlOperators& ops, const FeedbackParams& p) {
  IntegratorSpec euler = spec;
  euler.method = Method::euler;
  return LockstepIntegrator(ops, p, euler).step(s);
}

LockstepState step_strang(const LockstepState& s, const IntegratorSpec& spec,
                          const ControlOperators& ops, const FeedbackParams& p) {
  IntegratorSpec strang = spec;
  strang.method = Method::strang;
  return LockstepIntegrator(ops, p, strang).step(s);
}

// ---------------------------------------------------------------------------

std::int64_t step_count(double horizon, double dt) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ConfigError(fmt::format("horizon T must be positive, got {}", horizon));
  }
  const double ratio = horizon / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw ConfigError(fmt::format(
        "horizon T={} is not an integer multiple of dt={}", horizon, dt));
  }
  return static_cast<std::int64_t>(rounded);
}

RunOutcome simulate(const ControlOperators& ops, const FeedbackParams& params,
                    const IntegratorSpec& spec, const ModeVector& x0,
                    const RunControl& control, const RowSink& sink) {
  spec.validate();
  if (control.stride < 1) throw ConfigError("record stride must be >= 1");
  if (x0.size() != ops.modes()) {
    throw ConfigError(fmt::format("initial state has {} modes, operators {}",
                                  x0.size(), ops.modes()));
  }
  const std::int64_t steps = step_count(control.horizon, spec.dt);
  const SobolevWeight weight(ops.lambda, control.sobolev_order);
  const bool monotone =
      control.check_monotone && params.damping == Damping::clip;

  LockstepIntegrator integrator(ops, params, spec);
  LockstepState state;
  state.x_av = x0;
  state.x_eps = x0;

  RunOutcome outcome;
  const auto emit = [&](const LockstepState& s) {
    const FeedbackValues f = evaluate_feedback(s.x_av, ops, params);
    TrajectoryRow row;
    row.t = s.t;
    row.lyapunov_av = lyapunov(s.x_av, ops, params);
    row.dist_av = dist_to_target(s.x_av, weight);
    row.dist_eps = dist_to_target(s.x_eps, weight);
    row.gap_h2 = h2_gap(s.x_av, s.x_eps, ops.lambda);
    row.u = spec.epsilon > 0.0 ? control_value(s.t, f, spec.epsilon) : f.alpha;
    row.alpha = f.alpha;
    row.beta = f.beta;
    row.drift_eps = s.drift_eps;
    row.drift_av = s.drift_av;
    if (sink) sink(row);
    ++outcome.rows;
  };
  const auto abort = [&](const char* monitor, std::string detail) {
    outcome.aborted = true;
    outcome.monitor = monitor;
    outcome.diagnostic = std::move(detail);
  };

  emit(state);
  double previous_l = lyapunov(state.x_av, ops, params);
  for (std::int64_t n = 1; n <= steps; ++n) {
    LockstepState next = integrator.step(state);
    next.t = static_cast<double>(n) * spec.dt;

    const FeedbackValues& f = integrator.start_feedback();
    if (!(1.0 - params.gain * f.i2 > 0.0)) {
      abort("gain", fmt::format(
                        "1 - k*I2 = {:.6g} <= 0 at t={:.6g} (k={}, I2={:.6g}); "
                        "reduce the gain",
                        1.0 - params.gain * f.i2, state.t, params.gain, f.i2));
      break;
    }
    const double dev_av = std::abs(next.x_av.norm() - 1.0);
    const double dev_eps = std::abs(next.x_eps.norm() - 1.0);
    if (!(dev_av <= 1e-6 && dev_eps <= 1e-6)) {
      abort("sphere", fmt::format("state left the unit sphere at t={:.6g}: "
                                  "|‖X_av‖-1|={:.3g}, |‖X_eps‖-1|={:.3g}",
                                  next.t, dev_av, dev_eps));
      break;
    }
    const double l = lyapunov(next.x_av, ops, params);
    if (monotone && l > previous_l + 1e-8) {
      abort("lyapunov",
            fmt::format("L increased from {:.17g} to {:.17g} at t={:.6g}; "
                        "reduce dt or the gain",
                        previous_l, l, next.t));
      break;
    }
    previous_l = l;
    state = std::move(next);
    outcome.final_gap_h2 = h2_gap(state.x_av, state.x_eps, ops.lambda);
    outcome.sup_gap_h2 = std::max(outcome.sup_gap_h2, outcome.final_gap_h2);
    outcome.steps = n;
    if (n % control.stride == 0) emit(state);
  }
  outcome.final_state = state;
  return outcome;
}

Trajectory run(const ControlOperators& ops, const FeedbackParams& params,
               const IntegratorSpec& spec, const ModeVector& x0,
               const RunControl& control) {
  Trajectory traj;
  traj.outcome = simulate(ops, params, spec, x0, control,
                          [&](const TrajectoryRow& r) { traj.rows.push_back(r); });
  return traj;
}

}  // namespace bilinq
