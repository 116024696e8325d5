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
#ifndef INVLQR_DATASET_HPP
#define INVLQR_DATASET_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "invlqr/types.hpp"

namespace invlqr {

/// Either a known LTI plant or the nonlinear pendulum.
using PlantSpec = std::variant<LinearSystem, PendulumParams>;

int state_dim(const PlantSpec& plant);
int input_dim(const PlantSpec& plant);
/// "lti" or "pendulum".
std::string plant_id(const PlantSpec& plant);

struct DatasetMeta {
  PlantSpec plant = PendulumParams{};
  std::string controller_id;
  std::uint64_t seed = 0;
  double noise_std = 0.0;
  std::optional<OperatingPoint> operating_point;
  // True once to_deviation_coordinates has been applied.
  bool deviation_coordinates = false;
  // ISO-8601 UTC; empty when the dataset was produced by a pure generator.
  std::string created;

  friend bool operator==(const DatasetMeta&, const DatasetMeta&) = default;
};

/// M closed-loop trajectories plus provenance.
struct Dataset {
  std::vector<Trajectory> trajectories;
  DatasetMeta meta;

  int size() const noexcept { return static_cast<int>(trajectories.size()); }
  bool empty() const noexcept { return trajectories.empty(); }
  int state_dim() const;
  int input_dim() const;

  /// Throws ValidationError if trajectories are malformed or disagree with
  /// each other or with meta.plant on dimensions.
  void validate() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

}  // namespace invlqr

#endif  // INVLQR_DATASET_HPP
