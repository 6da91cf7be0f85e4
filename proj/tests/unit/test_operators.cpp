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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "bilinq/errors.hpp"
#include "bilinq/operators.hpp"

using namespace bilinq;
using std::numbers::pi;
using cd = std::complex<double>;

namespace {

const ControlOperators& validation_ops() {
  static const ControlOperators ops = [] {
    const SpectralBasis basis =
        build_basis(GridFunction::parse("harmonic_centered"), {50}, 5);
    return build_operators(basis, GridFunction::parse("x2"), GridFunction::parse("x"));
  }();
  return ops;
}

ModeVector validation_state() {
  ModeVector x = ModeVector::Zero(5);
  x(0) = 1.0 / std::sqrt(2.0);
  x(1) = cd(0.0, 1.0 / std::sqrt(2.0));
  return x;
}

ModeVector ground(int m, double phase = 0.0) {
  ModeVector x = ModeVector::Zero(m);
  x(0) = std::polar(1.0, phase);
  return x;
}

// Deterministic pseudo-state from an index (no RNG).
ModeVector grid_state(int m, int index) {
  ModeVector x(m);
  for (int k = 0; k < m; ++k) {
    const double a = std::cos(0.37 * index + 1.3 * k) + 0.1 * (k == 0);
    const double b = std::sin(0.91 * index * (k + 1) + 0.2);
    x(k) = cd(a, b);
  }
  return x.normalized();
}

}  // namespace

TEST_CASE("unit moment gives the identity") {
  const SpectralBasis basis = build_basis(GridFunction::parse("harmonic_centered"), {30}, 4);
  const ControlOperators ops =
      build_operators(basis, GridFunction::parse("one"), GridFunction::parse("one"));
  CHECK((ops.h1 - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-11);
  CHECK((ops.h2 - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-11);
  CHECK((ops.h0().diagonal() - basis.eigenvalues).norm() == 0.0);
}

TEST_CASE("free-particle moment matrices match symbolic integrals") {
  const SpectralBasis basis = build_basis(GridFunction::parse("zero"), {8}, 4);
  const ControlOperators ops =
      build_operators(basis, GridFunction::parse("x2"), GridFunction::parse("x"));
  for (int k = 1; k <= 4; ++k) {
    CHECK(std::abs(ops.h1(k - 1, k - 1) - (1.0 / 3.0 - 1.0 / (2.0 * k * k * pi * pi))) < 1e-11);
  }
  CHECK(std::abs(ops.h2(0, 1) - (-0.180126548697489371456)) < 1e-11);
  CHECK((ops.h1 - ops.h1.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((ops.h2 - ops.h2.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Lyapunov function") {
  const auto& ops = validation_ops();
  FeedbackParams p;
  p.gamma = 1.0 / (2.0 * std::pow(ops.lambda(1), 2));
  CHECK(lyapunov(ground(5), ops, p) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(lyapunov(ground(5, 2.1), ops, p)) < 1e-15);
  CHECK(lyapunov(validation_state(), ops, p) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(gamma_for_target(validation_state(), ops, 0.75) == doctest::Approx(p.gamma).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_for_target(ground(5), ops, 0.75), ConfigError);
  CHECK_THROWS_AS(gamma_for_target(validation_state(), ops, 0.4), ConfigError);

  for (int i = 0; i < 200; ++i) {
    const ModeVector x = grid_state(5, i);
    const double l = lyapunov(x, ops, p);
    CHECK(l >= 0.0);
    double weighted = 0.0;
    for (int k = 1; k < 5; ++k) weighted += std::pow(ops.lambda(k), 2) * std::norm(x(k));
    // Excited-mode H² energy is controlled by L/γ.
    CHECK(weighted <= l / p.gamma * (1.0 + 1e-12));
  }
}

TEST_CASE("feedback vanishes on the target and on real states") {
  const auto& ops = validation_ops();
  FeedbackParams p{0.1, 3e-4, Damping::clip};
  for (double phase : {0.0, 0.7, 2.5}) {
    const FeedbackValues f = evaluate_feedback(ground(5, phase), ops, p);
    CHECK(f.i1 == 0.0);
    CHECK(f.i2 == 0.0);
    CHECK(f.alpha == 0.0);
    CHECK(f.beta == 0.0);
  }
  ModeVector real(5);
  real << 0.5, -0.3, 0.6, 0.2, -0.1;
  real.normalize();
  CHECK(feedback_integral(Channel::dipole, real, ops, p) == 0.0);
  CHECK(feedback_integral(Channel::polarizability, real, ops, p) == 0.0);
}

TEST_CASE("I1 is half the Lyapunov slope along the dipole flow") {
  // d/ds L(exp(-i s H1) X) at s=0 equals 2 I1(X); finite differences on an
  // independently computed matrix exponential.
  const auto& ops = validation_ops();
  FeedbackParams p;
  p.gamma = gamma_for_target(validation_state(), ops, 0.75);
  const ModeVector x = validation_state();
  const Eigen::MatrixXcd h1 = ops.h1.cast<cd>();
  const auto l_at = [&](double s) {
    const Eigen::MatrixXcd u = (cd(0.0, -s) * h1).exp();
    return lyapunov(u * x, ops, p);
  };
  const double h = 1e-5;
  const double slope = (l_at(h) - l_at(-h)) / (2 * h);
  const double i1 = feedback_integral(Channel::dipole, x, ops, p);
  CHECK(std::abs(i1) > 1e-3);
  CHECK(std::abs(slope - 2.0 * i1) < 1e-8);

  const Eigen::MatrixXcd h2 = ops.h2.cast<cd>();
  const auto l2_at = [&](double s) {
    return lyapunov((cd(0.0, -s) * h2).exp() * x, ops, p);
  };
  const double slope2 = (l2_at(h) - l2_at(-h)) / (2 * h);
  CHECK(std::abs(slope2 - 2.0 * feedback_integral(Channel::polarizability, x, ops, p)) < 1e-8);
}

TEST_CASE("damping functions") {
  CHECK(damping(Damping::clip, 0.3) == 0.0);
  CHECK(damping(Damping::clip, 0.0) == 0.0);
  CHECK(damping(Damping::clip, -0.3) == doctest::Approx(0.3));
  CHECK(damping(Damping::smooth, 0.3) == 0.0);
  CHECK(damping(Damping::smooth, -0.5) == doctest::Approx(0.25 / 1.25));
  CHECK(damping(Damping::smooth, -1e-3) > 0.0);
  CHECK(parse_damping("smooth") == Damping::smooth);
  CHECK_THROWS_AS(parse_damping("hard"), ConfigError);
}

TEST_CASE("feedback sign and phase properties on a deterministic state grid") {
  const auto& ops = validation_ops();
  for (Damping kind : {Damping::clip, Damping::smooth}) {
    FeedbackParams p{0.1, gamma_for_target(validation_state(), ops, 0.75), kind};
    for (int i = 0; i < 300; ++i) {
      const ModeVector x = grid_state(5, i);
      const FeedbackValues f = evaluate_feedback(x, ops, p);
      CHECK(f.beta >= 0.0);
      if (f.i2 >= 0.0) CHECK(f.beta == 0.0);
      else CHECK(f.beta > 0.0);
      CHECK(f.alpha == -p.gain * f.i1);
      CHECK(feedback_alpha(x, ops, p) == f.alpha);
      CHECK(feedback_beta(x, ops, p) == f.beta);

      const ModeVector rotated = std::polar(1.0, 0.1 * i) * x;
      const FeedbackValues g = evaluate_feedback(rotated, ops, p);
      CHECK(std::abs(g.i1 - f.i1) < 1e-12);
      CHECK(std::abs(g.i2 - f.i2) < 1e-12);
      CHECK(std::abs(lyapunov(rotated, ops, p) - lyapunov(x, ops, p)) < 1e-12);
    }
  }
}

TEST_CASE("Lyapunov rate is non-positive while 1 - k I2 > 0") {
  FeedbackParams p{0.1, 1.0, Damping::clip};
  for (double i1 : {-0.3, 0.0, 0.2}) {
    for (double i2 : {-0.5, -0.1, 0.0, 0.4}) {
      FeedbackValues f;
      f.i1 = i1;
      f.i2 = i2;
      CHECK(lyapunov_rate(f, p) <= 0.0);
    }
  }
}
