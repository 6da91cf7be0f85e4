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

#include "bilinq/grid_function.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "bilinq/errors.hpp"

namespace bilinq {

namespace {

std::vector<double> parse_coefficients(const std::string& list,
                                       const std::string& descriptor) {
  std::vector<double> coeffs;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      coeffs.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("bad coefficient '{}' in function '{}'",
                                    item, descriptor));
    }
  }
  if (coeffs.empty()) {
    throw ConfigError(fmt::format("empty coefficient list in '{}'", descriptor));
  }
  return coeffs;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += fmt::format("{}{:.17g}", i ? "," : "", v[i]);
  }
  return out;
}

}  // namespace

GridFunction::GridFunction(std::string descriptor,
                           std::function<double(double)> f)
    : descriptor_(std::move(descriptor)), f_(std::move(f)) {}

GridFunction GridFunction::constant(double c) {
  return GridFunction(fmt::format("poly:{:.17g}", c), [c](double) { return c; });
}

GridFunction GridFunction::polynomial(std::vector<double> coeffs) {
  std::string d = "poly:" + join(coeffs);
  return GridFunction(std::move(d), [c = std::move(coeffs)](double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  });
}

GridFunction GridFunction::cosine_series(std::vector<double> coeffs) {
  std::string d = "cos:" + join(coeffs);
  return GridFunction(std::move(d), [c = std::move(coeffs)](double x) {
    double acc = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      acc += c[j] * std::cos(static_cast<double>(j) * x);
    }
    return acc;
  });
}

GridFunction GridFunction::parse(const std::string& descriptor) {
  if (descriptor == "zero") return {descriptor, [](double) { return 0.0; }};
  if (descriptor == "one") return {descriptor, [](double) { return 1.0; }};
  if (descriptor == "harmonic_centered") {
    return {descriptor, [](double x) { return (x - 0.5) * (x - 0.5); }};
  }
  if (descriptor == "x") return {descriptor, [](double x) { return x; }};
  if (descriptor == "x2") return {descriptor, [](double x) { return x * x; }};
  if (descriptor == "cosx") {
    return {descriptor, [](double x) { return std::cos(x); }};
  }
  if (descriptor == "cos2x") {
    return {descriptor, [](double x) { return std::cos(2.0 * x); }};
  }
  if (descriptor.rfind("poly:", 0) == 0) {
    return polynomial(parse_coefficients(descriptor.substr(5), descriptor));
  }
  if (descriptor.rfind("cos:", 0) == 0) {
    return cosine_series(parse_coefficients(descriptor.substr(4), descriptor));
  }
  throw ConfigError(fmt::format("unknown function '{}'", descriptor));
}

}  // namespace bilinq
