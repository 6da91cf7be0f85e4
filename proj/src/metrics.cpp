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

#include "bilinq/metrics.hpp"

#include <cmath>

#include "bilinq/errors.hpp"

namespace bilinq {

SobolevWeight::SobolevWeight(const Eigen::VectorXd& eigenvalues, double order)
    : order_(order), weights_(eigenvalues.size()) {
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
    if (!(eigenvalues(k) > 0.0)) {
      throw ConfigError("Sobolev weights need positive eigenvalues");
    }
    weights_(k) = std::pow(eigenvalues(k), order);
  }
}

double hs_norm(const ModeVector& x, const SobolevWeight& w) {
  return std::sqrt((w.weights().array() * x.array().abs2()).sum());
}

double dist_to_target(const ModeVector& x, const SobolevWeight& w) {
  // |x1 - x1/|x1||^2 = (|x1| - 1)^2; this form avoids the cancellation in
  // ||x||^2 + w1 - 2 w1 |x1| near the target.
  const double r = std::abs(x(0)) - 1.0;
  double squared = w.weights()(0) * r * r;
  for (Eigen::Index k = 1; k < x.size(); ++k) {
    squared += w.weights()(k) * std::norm(x(k));
  }
  return std::sqrt(squared);
}

double h2_gap(const ModeVector& xa, const ModeVector& xb,
              const Eigen::VectorXd& eigenvalues) {
  return std::sqrt(
      (eigenvalues.array().square() * (xa - xb).array().abs2()).sum());
}

}  // namespace bilinq
