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
#ifndef INVLQR_TYPES_HPP
#define INVLQR_TYPES_HPP

#include <Eigen/Dense>

namespace invlqr {

/// Discrete-time LTI plant x(k+1) = A x(k) + B u(k).
class LinearSystem {
 public:
  /// Throws ArgumentError unless A is n x n, B is n x m, n, m >= 1 and all
  /// entries are finite.
  LinearSystem(Eigen::MatrixXd A, Eigen::MatrixXd B);

  const Eigen::MatrixXd& A() const noexcept { return A_; }
  const Eigen::MatrixXd& B() const noexcept { return B_; }
  int state_dim() const noexcept { return static_cast<int>(A_.rows()); }
  int input_dim() const noexcept { return static_cast<int>(B_.cols()); }

  friend bool operator==(const LinearSystem& a, const LinearSystem& b) {
    return a.A_.rows() == b.A_.rows() && a.B_.cols() == b.B_.cols() &&
           a.A_ == b.A_ && a.B_ == b.B_;
  }

 private:
  Eigen::MatrixXd A_;
  Eigen::MatrixXd B_;
};

/// Damped pendulum discretized with sample time tau. Defaults are the
/// laboratory pendulum: m = 0.676 kg, g = 9.81 m/s^2, l = 0.45 m,
/// d = 0.1 N m s, tau = 0.02 s. State is (theta [rad], omega [rad/s]),
/// theta = 0 upright.
struct PendulumParams {
  double mass = 0.676;
  double gravity = 9.81;
  double length = 0.45;
  double damping = 0.1;
  double sample_time = 0.02;

  /// Throws ArgumentError unless every parameter is finite and > 0.
  void validate() const;

  double inertia() const noexcept { return mass * length * length; }

  friend bool operator==(const PendulumParams&,
                         const PendulumParams&) = default;
};

/// One closed-loop run. Column k of `states` is x(k), k = 0..N-1, column k
/// of `inputs` is u(k), k = 0..N-2. Sample k here is sample k+1 in the
/// 1-based notation common in the optimal control literature.
struct Trajectory {
  Eigen::MatrixXd states;  // n x N
  Eigen::MatrixXd inputs;  // m x (N-1)

  int length() const noexcept { return static_cast<int>(states.cols()); }
  int state_dim() const noexcept { return static_cast<int>(states.rows()); }
  int input_dim() const noexcept { return static_cast<int>(inputs.rows()); }

  /// Throws ArgumentError unless N >= 2, inputs has N-1 columns and all
  /// entries are finite.
  void validate() const;

  friend bool operator==(const Trajectory& a, const Trajectory& b) {
    return a.states.rows() == b.states.rows() &&
           a.states.cols() == b.states.cols() &&
           a.inputs.rows() == b.inputs.rows() &&
           a.inputs.cols() == b.inputs.cols() && a.states == b.states &&
           a.inputs == b.inputs;
  }
};

/// Point around which local behavior is explained.
struct OperatingPoint {
  Eigen::VectorXd x_bar;
  Eigen::VectorXd u_bar;

  friend bool operator==(const OperatingPoint& a, const OperatingPoint& b) {
    return a.x_bar.size() == b.x_bar.size() &&
           a.u_bar.size() == b.u_bar.size() && a.x_bar == b.x_bar &&
           a.u_bar == b.u_bar;
  }
};

}  // namespace invlqr

#endif  // INVLQR_TYPES_HPP
