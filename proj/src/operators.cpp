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

#include "bilinq/operators.hpp"

#include <cmath>

#include <fmt/format.h>

#include "bilinq/errors.hpp"

namespace bilinq {

std::string to_string(Damping d) {
  return d == Damping::clip ? "clip" : "smooth";
}

Damping parse_damping(const std::string& s) {
  if (s == "clip") return Damping::clip;
  if (s == "smooth") return Damping::smooth;
  throw ConfigError(fmt::format("unknown damping '{}' (clip|smooth)", s));
}

ControlOperators build_operators(const SpectralBasis& basis,
                                 const GridFunction& q1,
                                 const GridFunction& q2) {
  const int m = basis.retained();
  ControlOperators ops;
  ops.lambda = basis.eigenvalues;
  ops.h1.resize(m, m);
  ops.h2.resize(m, m);
  for (int i = 1; i <= m; ++i) {
    for (int j = i; j <= m; ++j) {
      const auto product = [&](double x) {
        return eigenfunction_value(basis, i, x) * eigenfunction_value(basis, j, x);
      };
      const double v1 = integrate([&](double x) { return q1(x) * product(x); });
      const double v2 = integrate([&](double x) { return q2(x) * product(x); });
      ops.h1(i - 1, j - 1) = ops.h1(j - 1, i - 1) = v1;
      ops.h2(i - 1, j - 1) = ops.h2(j - 1, i - 1) = v2;
    }
  }
  return ops;
}

double lyapunov(const ModeVector& x, const ControlOperators& ops,
                const FeedbackParams& p) {
  double excited = 0.0;
  for (int k = 1; k < ops.modes(); ++k) {
    excited += ops.lambda(k) * ops.lambda(k) * std::norm(x(k));
  }
  return p.gamma * excited + 1.0 - std::norm(x(0));
}

double feedback_integral(Channel channel, const ModeVector& x,
                         const ControlOperators& ops, const FeedbackParams& p) {
  const Eigen::MatrixXd& h = channel == Channel::dipole ? ops.h1 : ops.h2;
  // With w_1 = -1 and w_k = γ λ_k² (k >= 2) the integral is
  // Im Σ_k w_k (H x)_k conj(x_k). Diagonal terms are real, and the (j,k),(k,j)
  // pairs combine to H_jk (w_k - w_j) Im(x_j conj(x_k)), so states on the
  // target or with real coefficients give exactly zero.
  const int m = ops.modes();
  const auto weight = [&](int k) {
    return k == 0 ? -1.0 : p.gamma * ops.lambda(k) * ops.lambda(k);
  };
  double total = 0.0;
  for (int j = 0; j < m; ++j) {
    for (int k = j + 1; k < m; ++k) {
      const double im = x(j).imag() * x(k).real() - x(j).real() * x(k).imag();
      total += h(j, k) * (weight(k) - weight(j)) * im;
    }
  }
  return total;
}

double damping(Damping kind, double i2) {
  if (i2 >= 0.0) return 0.0;
  switch (kind) {
    case Damping::clip:
      return -i2;
    case Damping::smooth:
      return i2 * i2 / (1.0 + i2 * i2);
  }
  return 0.0;
}

double feedback_alpha(const ModeVector& x, const ControlOperators& ops,
                      const FeedbackParams& p) {
  return -p.gain * feedback_integral(Channel::dipole, x, ops, p);
}

double feedback_beta(const ModeVector& x, const ControlOperators& ops,
                     const FeedbackParams& p) {
  return damping(p.damping, feedback_integral(Channel::polarizability, x, ops, p));
}

FeedbackValues evaluate_feedback(const ModeVector& x,
                                 const ControlOperators& ops,
                                 const FeedbackParams& p) {
  FeedbackValues f;
  f.i1 = feedback_integral(Channel::dipole, x, ops, p);
  f.i2 = feedback_integral(Channel::polarizability, x, ops, p);
  f.alpha = -p.gain * f.i1;
  f.beta = damping(p.damping, f.i2);
  return f;
}

double lyapunov_rate(const FeedbackValues& f, const FeedbackParams& p) {
  const double g = damping(p.damping, f.i2);
  return -2.0 * (p.gain * f.i1 * f.i1 * (1.0 - p.gain * f.i2) -
                 0.5 * f.i2 * g * g);
}

double gamma_for_target(const ModeVector& x0, const ControlOperators& ops,
                        double target) {
  double excited = 0.0;
  for (int k = 1; k < ops.modes(); ++k) {
    excited += ops.lambda(k) * ops.lambda(k) * std::norm(x0(k));
  }
  if (excited == 0.0) {
    throw ConfigError(
        "cannot fit gamma: initial state has no excited-mode component");
  }
  const double gamma = (target - 1.0 + std::norm(x0(0))) / excited;
  if (!(gamma > 0.0)) {
    throw ConfigError(fmt::format(
        "Lyapunov target {} is below 1-|x1|^2 = {}; gamma would be {}", target,
        1.0 - std::norm(x0(0)), gamma));
  }
  return gamma;
}

}  // namespace bilinq
