/* Copyright 2026 The elastic-sched Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace elastic {

/// Invalid user input (configs, requests, workload files). Carries the name
/// of the offending field when there is one.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field.empty() ? what : field + ": " + what),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A processing profile cannot be built for the requested category/hardware.
class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Query outside a tabulated domain (e.g. GPU count beyond the comm grid).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Instance too large for exhaustive enumeration.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simulation failed to reach quiescence (event cap or permanent stall).
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace elastic
