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

#include "bilinq/spectral.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include "bilinq/errors.hpp"

namespace bilinq {

namespace {

constexpr unsigned kPanelPoints = 16;

struct Rule {
  std::vector<double> nodes;    // on [-1,1]
  std::vector<double> weights;
};

const Rule& reference_rule() {
  static const Rule rule = [] {
    using Gauss = boost::math::quadrature::gauss<double, kPanelPoints>;
    const auto& abscissa = Gauss::abscissa();
    const auto& weights = Gauss::weights();
    Rule r;
    // boost stores the non-negative half; mirror it.
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      r.nodes.push_back(abscissa[i]);
      r.weights.push_back(weights[i]);
      if (abscissa[i] != 0.0) {
        r.nodes.push_back(-abscissa[i]);
        r.weights.push_back(weights[i]);
      }
    }
    return r;
  }();
  return rule;
}

double composite(const std::function<double(double)>& f, int panels) {
  const Rule& rule = reference_rule();
  const double h = 1.0 / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    double panel = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double v = f(mid + 0.5 * h * rule.nodes[i]);
      if (!std::isfinite(v)) {
        throw NumericalError("quadrature: integrand is not finite on [0,1]");
      }
      panel += rule.weights[i] * v;
    }
    total += 0.5 * h * panel;
  }
  return total;
}

}  // namespace

double integrate(const std::function<double(double)>& f,
                 const QuadratureOptions& options) {
  int panels = std::max(1, options.initial_panels);
  double previous = composite(f, panels);
  while (panels < options.max_panels) {
    panels *= 2;
    const double current = composite(f, panels);
    if (std::abs(current - previous) < options.tolerance) return current;
    previous = current;
  }
  throw NumericalError(fmt::format(
      "quadrature did not converge within {} panels", options.max_panels));
}

Eigen::MatrixXd potential_matrix(const GridFunction& potential,
                                 const SineBasisSpec& spec) {
  if (spec.modes < 1) throw ConfigError("sine basis needs at least one mode");
  const int n = spec.modes;
  const double pi = std::numbers::pi;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      const double v = integrate([&](double x) {
        return potential(x) * 2.0 * std::sin(i * pi * x) * std::sin(j * pi * x);
      });
      b(i - 1, j - 1) = v;
      b(j - 1, i - 1) = v;
    }
    b(i - 1, i - 1) += (i * pi) * (i * pi);
  }
  return b;
}

SpectralBasis solve_eigenbasis(const Eigen::MatrixXd& b, int retained) {
  if (b.rows() != b.cols()) throw ConfigError("eigenbasis: matrix not square");
  if (retained < 1 || retained > b.rows()) {
    throw ConfigError(fmt::format(
        "eigenbasis: retained modes M={} must lie in [1, N={}]", retained,
        b.rows()));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenbasis: symmetric eigensolver did not converge");
  }

  SpectralBasis basis;
  basis.eigenvalues = solver.eigenvalues().head(retained);
  basis.vectors = solver.eigenvectors().leftCols(retained);
  for (int k = 0; k < retained; ++k) {
    auto column = basis.vectors.col(k);
    for (Eigen::Index j = 0; j < column.size(); ++j) {
      if (std::abs(column(j)) > 1e-8) {
        if (column(j) < 0.0) column = -column;
        break;
      }
    }
    if (k + 1 < retained &&
        std::abs(basis.eigenvalues(k + 1) - basis.eigenvalues(k)) < 1e-10) {
      basis.degenerate = true;
    }
  }
  return basis;
}

SpectralBasis build_basis(const GridFunction& potential,
                          const SineBasisSpec& spec, int retained) {
  return solve_eigenbasis(potential_matrix(potential, spec), retained);
}

double eigenfunction_value(const SpectralBasis& basis, int k, double x) {
  // sin(jπ) is not exactly zero in floating point.
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double pi = std::numbers::pi;
  const auto column = basis.vectors.col(k - 1);
  double acc = 0.0;
  for (Eigen::Index j = 0; j < column.size(); ++j) {
    acc += column(j) * std::sin((j + 1) * pi * x);
  }
  return std::numbers::sqrt2 * acc;
}

Eigen::VectorXd eigenfunction_values(const SpectralBasis& basis, double x) {
  if (x <= 0.0 || x >= 1.0) return Eigen::VectorXd::Zero(basis.retained());
  const double pi = std::numbers::pi;
  Eigen::VectorXd sines(basis.sine_modes());
  for (Eigen::Index j = 0; j < sines.size(); ++j) {
    sines(j) = std::numbers::sqrt2 * std::sin((j + 1) * pi * x);
  }
  return basis.vectors.transpose() * sines;
}

}  // namespace bilinq
