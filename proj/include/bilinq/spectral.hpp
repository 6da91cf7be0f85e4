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

#include <functional>

#include <Eigen/Dense>

#include "bilinq/grid_function.hpp"

namespace bilinq {

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadratureOptions {
  int initial_panels = 4;
  int max_panels = 1 << 16;
  /// Absolute difference between successive panel-doubling estimates.
  double tolerance = 1e-12;
};

/// Integral of f over [0,1] by composite 16-point Gauss-Legendre with panel
/// doubling. Throws NumericalError if the estimates have not settled by
/// max_panels or if f produces a non-finite value.
double integrate(const std::function<double(double)>& f,
                 const QuadratureOptions& options = {});

// ---------------------------------------------------------------------------
// Sine-basis Galerkin eigenbasis of -d^2/dx^2 + V with Dirichlet conditions
// ---------------------------------------------------------------------------

struct SineBasisSpec {
  int modes = 50;  ///< N, number of sqrt(2) sin(k pi x) modes.
};

/// Eigenpairs of -Δ+V truncated to M modes. Column k of `vectors` holds the
/// sine-basis coefficients of the (k+1)-th eigenfunction. Immutable once built.
struct SpectralBasis {
  Eigen::VectorXd eigenvalues;  ///< Length M, non-decreasing.
  Eigen::MatrixXd vectors;      ///< N x M, orthonormal columns.
  bool degenerate = false;      ///< Some adjacent gap below 1e-10.

  int retained() const { return static_cast<int>(eigenvalues.size()); }
  int sine_modes() const { return static_cast<int>(vectors.rows()); }
};

/// B[i][j] = δ_ij ((i+1)π)^2 + ∫ V(x) 2 sin((i+1)πx) sin((j+1)πx) dx.
Eigen::MatrixXd potential_matrix(const GridFunction& potential,
                                 const SineBasisSpec& spec);

/// The `retained` smallest eigenpairs of a symmetric matrix, sign-fixed so the
/// first component of magnitude > 1e-8 is positive.
SpectralBasis solve_eigenbasis(const Eigen::MatrixXd& b, int retained);

/// Convenience: potential_matrix followed by solve_eigenbasis.
SpectralBasis build_basis(const GridFunction& potential,
                          const SineBasisSpec& spec, int retained);

/// φ_k(x) = Σ_j a^k_j √2 sin(jπx), with k one-based.
double eigenfunction_value(const SpectralBasis& basis, int k, double x);

/// All retained eigenfunctions at x in one pass (zero-based entries).
Eigen::VectorXd eigenfunction_values(const SpectralBasis& basis, double x);

}  // namespace bilinq
