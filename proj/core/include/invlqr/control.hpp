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
#ifndef INVLQR_CONTROL_HPP
#define INVLQR_CONTROL_HPP

#include <optional>
#include <vector>

#include "invlqr/systems.hpp"
#include "invlqr/types.hpp"

namespace invlqr {

/// Stage cost x'Qx + u'Ru. There is no terminal weight in the LQ problems
/// this library poses to data; the MPC controllers below add one (see
/// mpc_gain_lti).
struct CostWeights {
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;

  /// Throws ArgumentError unless Q is symmetric PSD (min eigenvalue
  /// >= -1e-10), R is symmetric PD, and both are finite.
  void validate() const;
  /// Throws ArgumentError if the weights do not fit `sys`.
  void validate(const LinearSystem& sys) const;
};

/// Time-varying LQ solution over a horizon of H samples.
struct GainSchedule {
  std::vector<Eigen::MatrixXd> gains;           // K(0..H-2), m x n
  std::vector<Eigen::MatrixXd> value_matrices;  // P(0..H-1), n x n

  int horizon() const noexcept {
    return static_cast<int>(value_matrices.size());
  }
};

/// Backward Riccati sweep with P(H-1) = 0:
///   K(k) = (R + B'P(k+1)B)^-1 B'P(k+1)A
///   P(k) = Q + A'P(k+1)A - A'P(k+1)B K(k)
/// P(k) is symmetrized after every step. Throws ConditioningError if
/// R + B'PB is numerically singular.
GainSchedule riccati_solve(const LinearSystem& sys, const CostWeights& w,
                           int H);

/// Same sweep with a nonzero terminal value matrix P(H-1) = terminal.
GainSchedule riccati_solve(const LinearSystem& sys, const CostWeights& w,
                           int H, const Eigen::MatrixXd& terminal);

/// Optimal finite-horizon trajectory x(k+1) = (A - B K(k)) x(k) from x0,
/// using riccati_solve(sys, w, N); u(k) = -K(k) x(k).
Trajectory lqr_closed_loop(const LinearSystem& sys, const CostWeights& w,
                           const Eigen::VectorXd& x0, int N);

/// First-step gain of the unconstrained MPC with prediction horizon T.
///
/// Horizon convention: T decision inputs u(0..T-1) and T predicted states
/// x(1..T), each weighted by Q (equivalently, the Riccati sweep over T+1
/// samples with terminal weight Q). For an unconstrained LTI plant the
/// receding-horizon law is the static feedback u = -K x with this K.
Eigen::MatrixXd mpc_gain_lti(const LinearSystem& sys, const CostWeights& w,
                             int T);

/// Receding-horizon policy u = -mpc_gain_lti(sys, w, T) y.
Policy mpc_policy_lti(const LinearSystem& sys, const CostWeights& w, int T);

/// u_r = -m g l sin(theta_r); holds (theta_r, 0) fixed.
double equilibrium_input(const PendulumParams& p, double theta_r);

/// Set-point for the tracking MPC, held constant over the prediction
/// horizon.
struct ReferenceSignal {
  Eigen::VectorXd x_ref;
  Eigen::VectorXd u_ref;
};

struct NmpcOptions {
  int max_iterations = 50;
  // Relative to max(1, gradient norm at the initial guess).
  double stationarity_tolerance = 1e-8;
  double armijo_slope = 1e-4;
  double backtrack_factor = 0.5;
  int max_backtracks = 30;
};

/// Diagnostics of the most recent NMPC solve.
struct NmpcStats {
  int iterations = 0;
  double cost = 0.0;
  double gradient_norm = 0.0;
};

/// Unconstrained tracking MPC for a nonlinear plant, solved by iterative
/// linearization (Gauss-Newton on the input sequence).
///
/// Minimizes sum_{k=0}^{T-1} (u(k)-u_ref)'R(u(k)-u_ref)
///                          + (x(k+1)-x_ref)'Q(x(k+1)-x_ref)
/// over u(0..T-1) subject to x(k+1) = f(x(k), u(k)), following the same
/// horizon convention as mpc_gain_lti. Each iteration linearizes along the
/// current rollout, solves the time-varying LQ subproblem with a Riccati
/// sweep, and backtracks (Armijo) along the resulting rollout. The previous
/// solution, shifted by one step, warm-starts the next call.
///
/// Not thread-safe: one controller object per closed loop.
class NmpcController {
 public:
  NmpcController(const Plant& plant, CostWeights w, int T,
                 NmpcOptions opts = {});

  /// Returns u(0). Throws SolverError if not stationary after
  /// opts.max_iterations.
  Eigen::VectorXd step(const Eigen::VectorXd& x, const ReferenceSignal& ref);

  /// Forget the warm start; the next call starts from u_ref.
  void reset() noexcept { warm_.clear(); }

  const NmpcStats& last_stats() const noexcept { return stats_; }
  int horizon() const noexcept { return T_; }

 private:
  const Plant& plant_;
  CostWeights w_;
  int T_;
  NmpcOptions opts_;
  std::vector<Eigen::VectorXd> warm_;
  NmpcStats stats_;
};

/// Cold-started single NMPC solve; see NmpcController.
Eigen::VectorXd nmpc_step(const Plant& plant, const CostWeights& w,
                          const Eigen::VectorXd& x, const ReferenceSignal& ref,
                          int T, const NmpcOptions& opts = {});

}  // namespace invlqr

#endif  // INVLQR_CONTROL_HPP
