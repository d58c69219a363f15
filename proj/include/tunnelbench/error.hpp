// Copyright 2026 The tunnelbench Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tunnelbench {

/// Bad caller input: malformed files, out-of-range parameters, guards.
/// The CLI maps this family to exit code 1.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Problem shape not supported by a solver (e.g. K>2 terms handed to QMC).
class UnsupportedProblem : public InputError {
 public:
  using InputError::InputError;
};

/// Numerical failure: non-convergence, step-size underflow, failed
/// certification. The CLI maps this family to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A generated reference optimum is not a 1-flip local minimum of the full
/// problem. Carries the improving flip.
class CertificationError : public NumericalError {
 public:
  CertificationError(std::size_t variable, double energy_change)
      : NumericalError("reference optimum not a local minimum: flipping variable " +
                       std::to_string(variable) + " changes the energy by " +
                       std::to_string(energy_change)),
        variable_(variable),
        energy_change_(energy_change) {}

  std::size_t variable() const noexcept { return variable_; }
  double energy_change() const noexcept { return energy_change_; }

 private:
  std::size_t variable_;
  double energy_change_;
};

/// No grid point of a tuning search reached a nonzero success probability.
class TuningFailure : public NumericalError {
 public:
  TuningFailure(const std::string& what, std::size_t best_point, double best_probability)
      : NumericalError(what), best_point_(best_point), best_probability_(best_probability) {}

  /// Index of the grid point with the largest estimated success probability.
  std::size_t best_point() const noexcept { return best_point_; }
  double best_probability() const noexcept { return best_probability_; }

 private:
  std::size_t best_point_;
  double best_probability_;
};

}  // namespace tunnelbench
