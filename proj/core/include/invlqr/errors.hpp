/*
 Copyright 2026 The invlqr Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef INVLQR_ERRORS_HPP
#define INVLQR_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace invlqr {

// Dimension or value mismatch in a call argument.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent configuration (unknown keys, bad ranges, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be parsed. The message carries line/field context.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parsed file violates the dataset schema.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A simulated state became non-finite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::ptrdiff_t trajectory, std::ptrdiff_t step)
      : std::runtime_error(make_message(trajectory, step)),
        trajectory_(trajectory),
        step_(step) {}

  // -1 when the failing simulation was not part of a dataset.
  std::ptrdiff_t trajectory() const noexcept { return trajectory_; }
  std::ptrdiff_t step() const noexcept { return step_; }

 private:
  static std::string make_message(std::ptrdiff_t trajectory,
                                  std::ptrdiff_t step) {
    std::string msg = "simulation diverged at step " + std::to_string(step);
    if (trajectory >= 0) msg += " of trajectory " + std::to_string(trajectory);
    return msg;
  }

  std::ptrdiff_t trajectory_;
  std::ptrdiff_t step_;
};

// The least-squares regressor does not have full row rank.
class IdentifiabilityError : public std::runtime_error {
 public:
  IdentifiabilityError(int rank, int required)
      : std::runtime_error("regressor rank " + std::to_string(rank) +
                           " < required " + std::to_string(required) +
                           "; the data do not identify (A, B)"),
        rank_(rank) {}
  int rank() const noexcept { return rank_; }

 private:
  int rank_;
};

// R + B'PB (or a similar system matrix) is numerically singular.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative solver failed. `gradient_norm` is the last one observed.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double gradient_norm)
      : std::runtime_error(what + " (gradient norm " +
                           std::to_string(gradient_norm) + ")"),
        gradient_norm_(gradient_norm) {}
  double gradient_norm() const noexcept { return gradient_norm_; }

 private:
  double gradient_norm_;
};

}  // namespace invlqr

#endif  // INVLQR_ERRORS_HPP
