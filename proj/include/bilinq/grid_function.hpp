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
#include <string>
#include <vector>

namespace bilinq {

/// A real-valued function on [0,1] (potential or moment), carried with the
/// textual descriptor it was built from so configs can be echoed back.
class GridFunction {
 public:
  GridFunction(std::string descriptor, std::function<double(double)> f);

  double operator()(double x) const { return f_(x); }
  const std::string& descriptor() const noexcept { return descriptor_; }

  /// Parses a descriptor. Built-ins: zero, one, harmonic_centered ((x-1/2)^2),
  /// x, x2, cosx, cos2x. Coefficient lists: "poly:c0,c1,..." for sum c_j x^j
  /// and "cos:c0,c1,..." for sum c_j cos(j x). Throws ConfigError.
  static GridFunction parse(const std::string& descriptor);

  static GridFunction constant(double c);
  static GridFunction polynomial(std::vector<double> coeffs);
  static GridFunction cosine_series(std::vector<double> coeffs);

 private:
  std::string descriptor_;
  std::function<double(double)> f_;
};

}  // namespace bilinq
