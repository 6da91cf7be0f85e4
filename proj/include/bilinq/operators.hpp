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
#include <string>

#include <Eigen/Dense>

#include "bilinq/grid_function.hpp"
#include "bilinq/spectral.hpp"

namespace bilinq {

/// Complex coefficients of a wave function in the V-eigenbasis. States that
/// enter the dynamics live on the unit sphere.
using ModeVector = Eigen::VectorXcd;

/// Truncated Hamiltonian pieces in the V-eigenbasis: H0 = diag(λ),
/// H1/H2 the dipole and polarizability moment matrices.
struct ControlOperators {
  Eigen::VectorXd lambda;  ///< Diagonal of H0.
  Eigen::MatrixXd h1;
  Eigen::MatrixXd h2;

  int modes() const { return static_cast<int>(lambda.size()); }
  Eigen::MatrixXd h0() const { return lambda.asDiagonal(); }
};

enum class Channel { dipole = 1, polarizability = 2 };

/// Selector for the damping function g applied to I2.
enum class Damping {
  clip,    ///< g(y) = -min(y, 0)
  smooth,  ///< g(y) = y^2 / (1 + y^2) for y < 0, else 0
};

std::string to_string(Damping d);
Damping parse_damping(const std::string& s);

struct FeedbackParams {
  double gain = 0.05;   ///< k
  double gamma = 1.0;   ///< Lyapunov weight on the excited-mode energy.
  Damping damping = Damping::clip;
};

/// Feedback quantities evaluated at one state.
struct FeedbackValues {
  double i1 = 0.0;
  double i2 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  /// Coefficient of H2 in the averaged Hamiltonian, α² + β²/2.
  double averaged_h2_coefficient() const { return alpha * alpha + 0.5 * beta * beta; }
};

/// H0 = diag(λ); Hn[i][j] = ∫ Qn φ_i φ_j, integrated on the expanded
/// eigenfunctions.
ControlOperators build_operators(const SpectralBasis& basis,
                                 const GridFunction& q1,
                                 const GridFunction& q2);

/// γ Σ_{k≥2} λ_k² |x_k|² + 1 - |x_1|².
double lyapunov(const ModeVector& x, const ControlOperators& ops,
                const FeedbackParams& p);

/// Im( γ Σ_{k≥2} λ_k² (H_j x)_k conj(x_k) - (H_j x)_1 conj(x_1) ).
double feedback_integral(Channel channel, const ModeVector& x,
                         const ControlOperators& ops, const FeedbackParams& p);

double damping(Damping kind, double i2);

double feedback_alpha(const ModeVector& x, const ControlOperators& ops,
                      const FeedbackParams& p);
double feedback_beta(const ModeVector& x, const ControlOperators& ops,
                     const FeedbackParams& p);
FeedbackValues evaluate_feedback(const ModeVector& x,
                                 const ControlOperators& ops,
                                 const FeedbackParams& p);

/// Right-hand side of the Lyapunov derivative identity along the averaged
/// flow: -2 (k I1² (1 - k I2) - ½ I2 g(I2)²).
double lyapunov_rate(const FeedbackValues& f, const FeedbackParams& p);

/// γ such that lyapunov(x0) == target. Throws ConfigError when x0 carries no
/// excited-mode energy or when the resulting γ would not be positive.
double gamma_for_target(const ModeVector& x0, const ControlOperators& ops,
                        double target);

}  // namespace bilinq
