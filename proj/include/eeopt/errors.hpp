// Copyright 2026 The eeopt Authors
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

#ifndef EEOPT_ERRORS_HPP_
#define EEOPT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace eeopt {

// Shapes of instance/allocation/variable vectors disagree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An argument lies outside the domain of a mathematical operation
// (negative SINR, zero power in log2 space, WM at w in {0,1}, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Phase I could not find a strictly feasible point of a convex subproblem.
class InfeasibleSubproblem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The starting allocation handed to the SCO loop violates the original
// constraint set.
class InfeasibleInitialPoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration file or override.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eeopt

#endif  // EEOPT_ERRORS_HPP_
