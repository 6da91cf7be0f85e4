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

#include <Eigen/Dense>

#include "bilinq/operators.hpp"

namespace bilinq {

/// Discrete Sobolev weights w_k = λ_k^s on the retained modes.
class SobolevWeight {
 public:
  /// Throws ConfigError unless every λ_k > 0.
  SobolevWeight(const Eigen::VectorXd& eigenvalues, double order);

  double order() const noexcept { return order_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

 private:
  double order_;
  Eigen::VectorXd weights_;
};

/// sqrt(Σ w_k |x_k|²).
double hs_norm(const ModeVector& x, const SobolevWeight& w);

/// Distance to the ground-state circle {c e1 : |c| = 1}, minimised over c.
double dist_to_target(const ModeVector& x, const SobolevWeight& w);

/// Raw H² norm of xa - xb (weights λ_k²), no phase alignment.
double h2_gap(const ModeVector& xa, const ModeVector& xb,
              const Eigen::VectorXd& eigenvalues);

}  // namespace bilinq
