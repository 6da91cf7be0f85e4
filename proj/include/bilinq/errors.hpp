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

#include <stdexcept>
#include <string>

namespace bilinq {

/// Invalid or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature or eigensolver failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A runtime monitor of the closed-loop integration was violated.
class MonitorAbort : public std::runtime_error {
 public:
  MonitorAbort(std::string monitor, double time, const std::string& detail)
      : std::runtime_error(monitor + " violated at t=" + std::to_string(time) +
                           ": " + detail),
        monitor_(std::move(monitor)),
        time_(time) {}

  const std::string& monitor() const noexcept { return monitor_; }
  double time() const noexcept { return time_; }

 private:
  std::string monitor_;
  double time_;
};

}  // namespace bilinq
