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
#include "invlqr/bfgs.hpp"

#include <cmath>

namespace invlqr {

BfgsResult minimize_bfgs(const SmoothObjective& f, Eigen::VectorXd x0,
                         const BfgsOptions& opts) {
  const Eigen::Index p = x0.size();
  BfgsResult res;
  res.x = std::move(x0);

  Eigen::VectorXd g(p);
  res.value = f(res.x, &g);
  res.gradient_norm = g.norm();
  if (!std::isfinite(res.value) || !g.allFinite()) {
    res.stop = BfgsStop::kNonFinite;
    return res;
  }

  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(p, p);
  bool fresh = true;  // H has not been updated since the last reset
  Eigen::VectorXd x_new(p), g_new(p);

  for (res.iterations = 0; res.iterations < opts.max_iterations;
       ++res.iterations) {
    if (res.gradient_norm <= opts.gradient_tolerance) {
      res.stop = BfgsStop::kGradient;
      return res;
    }

    Eigen::VectorXd dir = -H * g;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      H.setIdentity();
      fresh = true;
      dir = -g;
      slope = -g.squaredNorm();
    }

    double step = 1.0;
    double f_new = 0.0;
    bool accepted = false;
    for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
      x_new = res.x + step * dir;
      f_new = f(x_new, &g_new);
      if (std::isfinite(f_new) && g_new.allFinite() &&
          f_new <= res.value + opts.armijo_slope * step * slope) {
        accepted = true;
        break;
      }
      step *= opts.backtrack_factor;
    }
    if (!accepted) {
      if (fresh) {
        res.stop = BfgsStop::kLineSearch;
        return res;
      }
      H.setIdentity();
      fresh = true;
      continue;
    }

    const Eigen::VectorXd s = x_new - res.x;
    const Eigen::VectorXd y = g_new - g;
    const double decrease = res.value - f_new;
    res.x = x_new;
    g = g_new;
    res.value = f_new;
    res.gradient_norm = g.norm();

    if (decrease <= opts.objective_tolerance * std::abs(res.value + decrease)) {
      res.stop = BfgsStop::kObjectiveDecrease;
      ++res.iterations;
      return res;
    }

    const double sy = s.dot(y);
    if (sy > 1e-300) {
      if (fresh) H *= sy / y.squaredNorm();
      const double rho = 1.0 / sy;
      const Eigen::VectorXd Hy = H * y;
      // H+ = (I - rho s y') H (I - rho y s') + rho s s'
      H += (rho * rho * y.dot(Hy) + rho) * (s * s.transpose()) -
           rho * (Hy * s.transpose() + s * Hy.transpose());
      fresh = false;
    }
  }
  res.stop = res.gradient_norm <= opts.gradient_tolerance
                 ? BfgsStop::kGradient
                 : BfgsStop::kMaxIterations;
  return res;
}

}  // namespace invlqr
