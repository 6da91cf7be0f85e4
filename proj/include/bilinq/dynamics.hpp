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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bilinq/operators.hpp"

namespace bilinq {

enum class Method { euler, strang };

/// Where the averaged-state feedback feeding a Strang step is evaluated.
enum class FeedbackSampling {
  step_start,  ///< α, β frozen at the averaged state at the start of the step.
  midpoint,    ///< α, β at a half-step predictor of the averaged state.
};

std::string to_string(Method m);
Method parse_method(const std::string& s);
std::string to_string(FeedbackSampling s);
FeedbackSampling parse_sampling(const std::string& s);

struct IntegratorSpec {
  Method method = Method::strang;
  double dt = 1e-3;
  /// Fast period scale of u = α + β sin(t/ε). Zero runs the averaged system
  /// alone and mirrors it into the oscillating slot.
  double epsilon = 1e-3;
  FeedbackSampling sampling = FeedbackSampling::midpoint;

  /// Throws ConfigError unless dt > 0, ε >= 0 and dt <= ε when ε > 0.
  void validate() const;
};

struct LockstepState {
  double t = 0.0;
  ModeVector x_eps;  ///< Oscillating system.
  ModeVector x_av;   ///< Averaged closed-loop system.
  /// |‖X‖ - 1| after the last step, before any renormalisation.
  double drift_eps = 0.0;
  double drift_av = 0.0;
};

/// -i (H0 + α H1 + (α² + β²/2) H2) x, feedback evaluated at x.
ModeVector averaged_rhs(const ModeVector& x_av, const ControlOperators& ops,
                        const FeedbackParams& p);

/// -i (H0 + u H1 + u² H2) x.
ModeVector oscillating_rhs(const ModeVector& x_eps, double u,
                           const ControlOperators& ops);

/// u(t) = α(x_av) + β(x_av) sin(t/ε). The feedback acts through the averaged
/// state only; the oscillating system is driven open loop.
double control_value(double t, const ModeVector& x_av, double epsilon,
                     const ControlOperators& ops, const FeedbackParams& p);
double control_value(double t, const FeedbackValues& f, double epsilon);

/// Applies exp(-i dt (a H1 + b H2)) through a cached eigendecomposition of the
/// real symmetric generator. The factorisation is reused while (a, b) stay
/// within 1e-14 of the cached pair.
class ControlPropagator {
 public:
  explicit ControlPropagator(const ControlOperators& ops);

  void apply(double a, double b, double dt, ModeVector& x);

 private:
  const ControlOperators* ops_;
  bool cached_ = false;
  bool zero_ = false;
  double a_ = 0.0;
  double b_ = 0.0;
  double dt_ = 0.0;
  Eigen::MatrixXd vectors_;
  Eigen::VectorXcd phases_;
};

/// Advances the averaged and oscillating systems together with a shared dt.
/// Owns the propagator caches; one instance per run.
class LockstepIntegrator {
 public:
  LockstepIntegrator(const ControlOperators& ops, const FeedbackParams& params,
                     const IntegratorSpec& spec);

  LockstepState step(const LockstepState& s);

  /// Feedback at the averaged state of the most recent step input.
  const FeedbackValues& start_feedback() const noexcept { return start_; }

 private:
  LockstepState step_euler(const LockstepState& s);
  LockstepState step_strang(const LockstepState& s);
  void strang_substep(ModeVector& x, double a, double b, double dt,
                      ControlPropagator& propagator);

  const ControlOperators& ops_;
  FeedbackParams params_;
  IntegratorSpec spec_;
  ControlPropagator predictor_;
  ControlPropagator averaged_;
  ControlPropagator oscillating_;
  FeedbackValues start_;
};

LockstepState step_euler(const LockstepState& s, const IntegratorSpec& spec,
                         const ControlOperators& ops, const FeedbackParams& p);
LockstepState step_strang(const LockstepState& s, const IntegratorSpec& spec,
                          const ControlOperators& ops, const FeedbackParams& p);

// ---------------------------------------------------------------------------
// Closed-loop run with runtime monitors
// ---------------------------------------------------------------------------

struct RunControl {
  double horizon = 1.0;  ///< T
  int stride = 1;        ///< Record every `stride` steps.
  double sobolev_order = 1.8;
  /// Enforce L(X_av) non-increasing (per-step slack 1e-8) under clip damping.
  bool check_monotone = true;
};

struct TrajectoryRow {
  double t = 0.0;
  double lyapunov_av = 0.0;
  double dist_av = 0.0;
  double dist_eps = 0.0;
  double gap_h2 = 0.0;
  double u = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double drift_eps = 0.0;
  double drift_av = 0.0;
};

struct RunOutcome {
  std::int64_t steps = 0;  ///< Steps completed.
  std::int64_t rows = 0;
  bool aborted = false;
  std::string monitor;     ///< sphere | gain | lyapunov when aborted.
  std::string diagnostic;
  /// H² gap between the two systems, sup over every completed step and at the
  /// last completed step.
  double sup_gap_h2 = 0.0;
  double final_gap_h2 = 0.0;
  LockstepState final_state;
};

using RowSink = std::function<void(const TrajectoryRow&)>;

/// Number of steps for horizon T at step dt. Throws ConfigError if T is not
/// an integer multiple of dt (relative slack 1e-9).
std::int64_t step_count(double horizon, double dt);

/// Integrates from x0 over [0, T], streaming recorded rows into `sink`.
/// A monitor violation stops the run and is reported in the outcome; rows
/// already emitted are left untouched.
RunOutcome simulate(const ControlOperators& ops, const FeedbackParams& params,
                    const IntegratorSpec& spec, const ModeVector& x0,
                    const RunControl& control, const RowSink& sink);

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  RunOutcome outcome;
};

Trajectory run(const ControlOperators& ops, const FeedbackParams& params,
               const IntegratorSpec& spec, const ModeVector& x0,
               const RunControl& control);

}  // namespace bilinq
