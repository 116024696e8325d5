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
#include "invlqr/systems.hpp"

#include <cmath>
#include <string>

#include "invlqr/errors.hpp"
#include "invlqr/rng.hpp"

namespace invlqr {

// ---------------------------------------------------------------------------
// Value types

LinearSystem::LinearSystem(Eigen::MatrixXd A, Eigen::MatrixXd B)
    : A_(std::move(A)), B_(std::move(B)) {
  if (A_.rows() < 1 || A_.rows() != A_.cols()) {
    throw ArgumentError("LinearSystem: A must be square with n >= 1, got " +
                        std::to_string(A_.rows()) + "x" +
                        std::to_string(A_.cols()));
  }
  if (B_.rows() != A_.rows() || B_.cols() < 1) {
    throw ArgumentError("LinearSystem: B must be " +
                        std::to_string(A_.rows()) + "xm with m >= 1, got " +
                        std::to_string(B_.rows()) + "x" +
                        std::to_string(B_.cols()));
  }
  if (!A_.allFinite() || !B_.allFinite()) {
    throw ArgumentError("LinearSystem: non-finite entry");
  }
}

void PendulumParams::validate() const {
  for (double v : {mass, gravity, length, damping, sample_time}) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw ArgumentError(
          "PendulumParams: every parameter must be finite and positive");
    }
  }
}

void Trajectory::validate() const {
  if (states.cols() < 2) {
    throw ArgumentError("Trajectory: need N >= 2 samples, got " +
                        std::to_string(states.cols()));
  }
  if (states.rows() < 1 || inputs.rows() < 1) {
    throw ArgumentError("Trajectory: empty state or input dimension");
  }
  if (inputs.cols() != states.cols() - 1) {
    throw ArgumentError("Trajectory: " + std::to_string(states.cols()) +
                        " states need " + std::to_string(states.cols() - 1) +
                        " inputs, got " + std::to_string(inputs.cols()));
  }
  if (!states.allFinite() || !inputs.allFinite()) {
    throw ArgumentError("Trajectory: non-finite sample");
  }
}

// ---------------------------------------------------------------------------
// Plants

Eigen::VectorXd lti_step(const LinearSystem& sys, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u) {
  if (x.size() != sys.state_dim() || u.size() != sys.input_dim()) {
    throw ArgumentError("lti_step: expected x in R^" +
                        std::to_string(sys.state_dim()) + " and u in R^" +
                        std::to_string(sys.input_dim()));
  }
  return sys.A() * x + sys.B() * u;
}

Eigen::Vector2d pendulum_step(const PendulumParams& p, const Eigen::Vector2d& x,
                              double u) {
  const double tau = p.sample_time;
  const double theta = x(0);
  const double omega = x(1);
  return {theta + tau * omega,
          tau * p.gravity / p.length * std::sin(theta) +
              (1.0 - tau * p.damping / p.inertia()) * omega +
              tau / p.inertia() * u};
}

LinearSystem pendulum_linearize(const PendulumParams& p, double theta_bar) {
  const double tau = p.sample_time;
  Eigen::Matrix2d A;
  A << 1.0, tau,
       tau * p.gravity / p.length * std::cos(theta_bar),
       1.0 - tau * p.damping / p.inertia();
  Eigen::Vector2d B(0.0, tau / p.inertia());
  return LinearSystem(A, B);
}

StepJacobians Plant::linearize(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& u) const {
  const int n = state_dim();
  const int m = input_dim();
  StepJacobians J{Eigen::MatrixXd(n, n), Eigen::MatrixXd(n, m)};
  for (int j = 0; j < n; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(x(j)));
    Eigen::VectorXd xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    J.A.col(j) = (step(xp, u) - step(xm, u)) / (2.0 * h);
  }
  for (int j = 0; j < m; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(u(j)));
    Eigen::VectorXd up = u, um = u;
    up(j) += h;
    um(j) -= h;
    J.B.col(j) = (step(x, up) - step(x, um)) / (2.0 * h);
  }
  return J;
}

Eigen::VectorXd LtiPlant::step(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& u) const {
  return lti_step(sys_, x, u);
}

StepJacobians LtiPlant::linearize(const Eigen::VectorXd&,
                                  const Eigen::VectorXd&) const {
  return {sys_.A(), sys_.B()};
}

PendulumPlant::PendulumPlant(PendulumParams params) : params_(params) {
  params_.validate();
}

Eigen::VectorXd PendulumPlant::step(const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& u) const {
  if (x.size() != 2 || u.size() != 1) {
    throw ArgumentError("PendulumPlant::step: expected x in R^2 and u in R^1");
  }
  return pendulum_step(params_, Eigen::Vector2d(x(0), x(1)), u(0));
}

StepJacobians PendulumPlant::linearize(const Eigen::VectorXd& x,
                                       const Eigen::VectorXd&) const {
  const LinearSystem lin = pendulum_linearize(params_, x(0));
  return {lin.A(), lin.B()};
}

std::unique_ptr<Plant> make_plant(const PlantSpec& spec) {
  if (const auto* sys = std::get_if<LinearSystem>(&spec)) {
    return std::make_unique<LtiPlant>(*sys);
  }
  return std::make_unique<PendulumPlant>(std::get<PendulumParams>(spec));
}

// ---------------------------------------------------------------------------
// Simulation

Trajectory simulate_closed_loop(const Plant& plant, const Policy& policy,
                                const Eigen::VectorXd& x0, int N,
                                double noise_std, std::uint64_t seed) {
  const int n = plant.state_dim();
  const int m = plant.input_dim();
  if (N < 2) throw ArgumentError("simulate_closed_loop: N must be >= 2");
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
    throw ArgumentError("simulate_closed_loop: noise_std must be >= 0");
  }
  if (x0.size() != n) {
    throw ArgumentError("simulate_closed_loop: x0 has dimension " +
                        std::to_string(x0.size()) + ", plant has " +
                        std::to_string(n));
  }

  CounterRng noise(seed, streams::kMeasurementNoise);
  Trajectory traj{Eigen::MatrixXd(n, N), Eigen::MatrixXd(m, N - 1)};
  Eigen::VectorXd x = x0;
  for (int k = 0; k < N; ++k) {
    if (!x.allFinite()) throw DivergenceError(-1, k);
    Eigen::VectorXd y = x;
    if (noise_std > 0.0) {
      for (int i = 0; i < n; ++i) y(i) += noise_std * noise.gaussian();
    }
    traj.states.col(k) = y;
    if (k == N - 1) break;

    const Eigen::VectorXd u = policy(k, y);
    if (u.size() != m) {
      throw ArgumentError("simulate_closed_loop: policy returned " +
                          std::to_string(u.size()) + " inputs, plant takes " +
                          std::to_string(m));
    }
    if (!u.allFinite()) throw DivergenceError(-1, k);
    traj.inputs.col(k) = u;
    x = plant.step(x, u);
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Least-squares identification

LinearSystem estimate_linear_system(const Dataset& data) {
  if (data.empty()) {
    throw ArgumentError("estimate_linear_system: empty dataset");
  }
  const int n = data.trajectories.front().state_dim();
  const int m = data.trajectories.front().input_dim();

  Eigen::Index samples = 0;
  for (const Trajectory& t : data.trajectories) {
    if (t.state_dim() != n || t.input_dim() != m) {
      throw ArgumentError(
          "estimate_linear_system: trajectories disagree on dimensions");
    }
    samples += t.length() - 1;
  }

  // Rows are samples: [x(k)' u(k)'] Theta = x(k+1)', Theta = [A'; B'].
  Eigen::MatrixXd regressor(samples, n + m);
  Eigen::MatrixXd target(samples, n);
  Eigen::Index row = 0;
  for (const Trajectory& t : data.trajectories) {
    const int steps = t.length() - 1;
    regressor.block(row, 0, steps, n) = t.states.leftCols(steps).transpose();
    regressor.block(row, n, steps, m) = t.inputs.transpose();
    target.middleRows(row, steps) = t.states.rightCols(steps).transpose();
    row += steps;
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(
      regressor, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const int required = n + m;
  int rank = 0;
  const double largest = sv.size() > 0 ? sv(0) : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (largest > 0.0 && sv(i) >= 1e-10 * largest) ++rank;
  }
  if (rank < required) throw IdentifiabilityError(rank, required);

  const Eigen::MatrixXd theta = svd.solve(target);
  return LinearSystem(theta.topRows(n).transpose(),
                      theta.bottomRows(m).transpose());
}

}  // namespace invlqr
