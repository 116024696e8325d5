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
#ifndef INVLQR_SYSTEMS_HPP
#define INVLQR_SYSTEMS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "invlqr/dataset.hpp"
#include "invlqr/types.hpp"

namespace invlqr {

/// x(k+1) = A x + B u. Throws ArgumentError on dimension mismatch.
Eigen::VectorXd lti_step(const LinearSystem& sys, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u);

/// One step of the sampled pendulum:
///   theta' = theta + tau * omega
///   omega' = (tau g / l) sin(theta) + (1 - tau d / (m l^2)) omega
///            + tau / (m l^2) u
Eigen::Vector2d pendulum_step(const PendulumParams& p, const Eigen::Vector2d& x,
                              double u);

/// Jacobian of pendulum_step at (theta_bar, 0).
LinearSystem pendulum_linearize(const PendulumParams& p, double theta_bar);

/// Jacobians of a step map evaluated at some (x, u).
struct StepJacobians {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
};

/// A discrete-time plant x' = f(x, u).
class Plant {
 public:
  virtual ~Plant() = default;

  virtual int state_dim() const = 0;
  virtual int input_dim() const = 0;
  virtual Eigen::VectorXd step(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& u) const = 0;
  /// Central finite differences unless overridden.
  virtual StepJacobians linearize(const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& u) const;
};

class LtiPlant final : public Plant {
 public:
  explicit LtiPlant(LinearSystem sys) : sys_(std::move(sys)) {}

  int state_dim() const override { return sys_.state_dim(); }
  int input_dim() const override { return sys_.input_dim(); }
  Eigen::VectorXd step(const Eigen::VectorXd& x,
                       const Eigen::VectorXd& u) const override;
  StepJacobians linearize(const Eigen::VectorXd& x,
                          const Eigen::VectorXd& u) const override;

  const LinearSystem& system() const noexcept { return sys_; }

 private:
  LinearSystem sys_;
};

class PendulumPlant final : public Plant {
 public:
  explicit PendulumPlant(PendulumParams params);

  int state_dim() const override { return 2; }
  int input_dim() const override { return 1; }
  Eigen::VectorXd step(const Eigen::VectorXd& x,
                       const Eigen::VectorXd& u) const override;
  StepJacobians linearize(const Eigen::VectorXd& x,
                          const Eigen::VectorXd& u) const override;

  const PendulumParams& params() const noexcept { return params_; }

 private:
  PendulumParams params_;
};

std::unique_ptr<Plant> make_plant(const PlantSpec& spec);

/// State feedback u = policy(k, y) where y is the measured state at step k.
using Policy = std::function<Eigen::VectorXd(int k, const Eigen::VectorXd& y)>;

/// Rolls `plant` forward N-1 steps from x0 under `policy`.
///
/// The plant state evolves without noise. What is recorded, and what the
/// policy sees, is the measurement y(k) = x(k) + e(k) with e(k) i.i.d.
/// N(0, noise_std^2) per component, drawn from CounterRng(seed,
/// streams::kMeasurementNoise). Throws DivergenceError (trajectory index
/// -1) if a state or input turns non-finite.
Trajectory simulate_closed_loop(const Plant& plant, const Policy& policy,
                                const Eigen::VectorXd& x0, int N,
                                double noise_std, std::uint64_t seed);

/// Ordinary least-squares fit of x(k+1) = A x(k) + B u(k) over every
/// consecutive pair in every trajectory of `data`.
///
/// Throws ArgumentError for an empty dataset and IdentifiabilityError when
/// the smallest singular value of the regressor [x; u] is below 1e-10 times
/// the largest.
LinearSystem estimate_linear_system(const Dataset& data);

}  // namespace invlqr

#endif  // INVLQR_SYSTEMS_HPP
