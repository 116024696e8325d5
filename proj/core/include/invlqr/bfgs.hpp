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
#ifndef INVLQR_BFGS_HPP
#define INVLQR_BFGS_HPP

#include <functional>

#include <Eigen/Dense>

namespace invlqr {

/// f(x), writing the gradient into *grad.
using SmoothObjective =
    std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct BfgsOptions {
  int max_iterations = 500;
  // Stop when an accepted step lowers f by less than this fraction of f.
  double objective_tolerance = 1e-12;
  double gradient_tolerance = 1e-9;
  double armijo_slope = 1e-4;
  double backtrack_factor = 0.5;
  int max_backtracks = 60;
};

enum class BfgsStop {
  kGradient,
  kObjectiveDecrease,
  kLineSearch,
  kMaxIterations,
  kNonFinite
};

struct BfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  BfgsStop stop = BfgsStop::kMaxIterations;

  bool converged() const noexcept {
    return stop == BfgsStop::kGradient || stop == BfgsStop::kObjectiveDecrease;
  }
};

/// Dense BFGS on the inverse Hessian with Armijo backtracking. The first
/// inverse Hessian is rescaled by s'y / y'y after the first step; updates
/// with s'y <= 0 are skipped.
BfgsResult minimize_bfgs(const SmoothObjective& f, Eigen::VectorXd x0,
                         const BfgsOptions& opts = {});

}  // namespace invlqr

#endif  // INVLQR_BFGS_HPP
