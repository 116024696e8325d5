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
#ifndef INVLQR_DATA_IO_HPP
#define INVLQR_DATA_IO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "invlqr/control.hpp"
#include "invlqr/dataset.hpp"
#include "invlqr/ioc.hpp"

namespace invlqr {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class ControllerKind {
  kMpc,  // receding-horizon MPC (LTI) or NMPC (pendulum)
  kLqr   // finite-horizon LQR over the whole trajectory, LTI only
};

struct ControllerConfig {
  ControllerKind kind = ControllerKind::kMpc;
  int horizon = 10;
  CostWeights weights;
  // Pendulum reference angle theta_bar [rad].
  double theta_bar = 0.0;
  NmpcOptions nmpc;
};

struct SamplingConfig {
  int M = 30;
  int N = 30;
  std::vector<Interval> x0_bounds;
  double noise_std = 0.0;
  // Std of the per-step reference perturbation e(k) (pendulum only).
  double reference_std = 0.0;
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  PlantSpec plant = PendulumParams{};
  ControllerConfig controller;
  SamplingConfig sampling;
  IocConfig ioc;

  /// Throws ConfigError on inconsistent dimensions, non-finite or empty
  /// bounds, M < 1, N < 2, negative noise, or an LQR controller on the
  /// pendulum.
  void validate() const;
};

/// Parses the ExperimentConfig JSON document (keys `plant`, `controller`,
/// `sampling`, `ioc`). Unknown keys at any level raise ConfigError listing
/// them; ParseError for malformed JSON.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
std::string experiment_config_to_json(const ExperimentConfig& cfg);

/// Parses a bare IocConfig object (the `ioc` section of an experiment).
IocConfig parse_ioc_config(const std::string& json_text);
IocConfig load_ioc_config(const std::filesystem::path& path);

/// M i.i.d. uniform samples in the box, from CounterRng(seed,
/// streams::kInitialConditions). Degenerate intervals [c, c] give c.
std::vector<Eigen::VectorXd> sample_initial_conditions(
    const std::vector<Interval>& bounds, int M, std::uint64_t seed);

/// Simulates the configured closed loop from each sampled initial
/// condition. Trajectory i draws its measurement noise and reference
/// perturbations from substreams keyed by seed + i. For the pendulum the
/// reference is theta_r(k) = theta_bar + e(k), e(k) ~ N(0, reference_std^2)
/// redrawn every step, u_r(k) = equilibrium_input(theta_r(k)); the NMPC
/// warm start is reset per trajectory. meta.created is left empty.
///
/// Throws DivergenceError naming the trajectory and step.
Dataset generate_dataset(const ExperimentConfig& cfg);

/// Operating point recorded for a configuration: (theta_bar, 0) and its
/// equilibrium torque for the pendulum, the origin otherwise.
OperatingPoint operating_point(const ExperimentConfig& cfg);

/// Subtracts (op.x_bar, op.u_bar) from every sample and records op.
Dataset to_deviation_coordinates(const Dataset& data, const OperatingPoint& op);

/// JSON bundle: {"meta": {...}, "trajectories": [{"states": [[...]],
/// "inputs": [[...]]}]}. Doubles are written in shortest round-trip form.
std::string dataset_to_json(const Dataset& data);
/// ParseError (with line/column or field path) for malformed documents,
/// ValidationError for dimension inconsistencies.
Dataset dataset_from_json(const std::string& json_text);

void save_dataset(const Dataset& data, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

/// Trajectory CSV: header `traj_id,k,x0..x{n-1},u0..u{m-1}`, k 0-based, the
/// input cells of each trajectory's final sample empty, values with 17
/// significant digits.
std::string trajectories_to_csv(const Dataset& data);
/// Rebuilds the trajectories of a CSV file; dimensions come from
/// meta.plant. ValidationError naming the traj_id when a row's input
/// columns disagree with meta.
Dataset trajectories_from_csv(const std::string& csv_text,
                              const DatasetMeta& meta);

void save_trajectories_csv(const Dataset& data,
                           const std::filesystem::path& path);
Dataset load_trajectories_csv(const std::filesystem::path& path,
                              const DatasetMeta& meta);

/// "%.17g".
std::string format_double(double v);

}  // namespace invlqr

#endif  // INVLQR_DATA_IO_HPP
