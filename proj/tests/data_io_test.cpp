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
#include <filesystem>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>

#include "invlqr/data_io.hpp"
#include "invlqr/errors.hpp"
#include "invlqr/systems.hpp"
#include "oracles.hpp"

namespace invlqr {
namespace {

namespace fs = std::filesystem;
using testing::mpc_weights;
using testing::second_order;

ExperimentConfig lti_config() {
  ExperimentConfig cfg;
  cfg.plant = second_order();
  cfg.controller.horizon = 10;
  cfg.controller.weights = mpc_weights();
  cfg.sampling.M = 30;
  cfg.sampling.N = 30;
  cfg.sampling.x0_bounds = {{-2, 2}, {-2, 2}};
  cfg.sampling.noise_std = 0.01;
  cfg.sampling.seed = 4;
  return cfg;
}

ExperimentConfig pendulum_config(double theta_bar) {
  ExperimentConfig cfg;
  cfg.plant = PendulumParams{};
  cfg.controller.horizon = 5;
  cfg.controller.weights = {Eigen::Vector2d(1000, 100).asDiagonal(),
                            Eigen::MatrixXd::Identity(1, 1)};
  cfg.controller.theta_bar = theta_bar;
  cfg.sampling.M = 6;
  cfg.sampling.N = 30;
  cfg.sampling.x0_bounds = {{theta_bar - 0.3, theta_bar + 0.3}, {-0.3, 0.3}};
  cfg.sampling.reference_std = 0.05;
  cfg.sampling.seed = 2;
  return cfg;
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("invlqr_data_io_" + name);
}

TEST(SampleInitialConditions, DegenerateBounds) {
  const auto xs = sample_initial_conditions({{0.5, 0.5}, {-1, -1}}, 5, 3);
  for (const auto& x : xs) EXPECT_EQ(x, Eigen::VectorXd(Eigen::Vector2d(0.5, -1)));
}

TEST(SampleInitialConditions, Deterministic) {
  EXPECT_EQ(sample_initial_conditions({{-2, 2}}, 20, 3),
            sample_initial_conditions({{-2, 2}}, 20, 3));
}

TEST(SampleInitialConditions, UniformMoments) {
  const auto xs = sample_initial_conditions({{-2, 2}, {-2, 2}}, 10000, 1);
  for (int d = 0; d < 2; ++d) {
    double sum = 0.0, sq = 0.0;
    for (const auto& x : xs) {
      sum += x(d);
      sq += x(d) * x(d);
    }
    const double mean = sum / 10000.0;
    EXPECT_NEAR(mean, 0.0, 0.05);
    EXPECT_NEAR(sq / 10000.0 - mean * mean, 4.0 / 3.0, 0.1);
  }
}

TEST(GenerateDataset, StandardProtocolShape) {
  const Dataset d = generate_dataset(lti_config());
  ASSERT_EQ(d.size(), 30);
  for (const Trajectory& t : d.trajectories) {
    EXPECT_EQ(t.states.cols(), 30);
    EXPECT_EQ(t.inputs.cols(), 29);
  }
  EXPECT_EQ(d.meta.controller_id, "mpc_T10");
  EXPECT_NO_THROW(d.validate());
}

TEST(GenerateDataset, SameSeedSameBytes) {
  EXPECT_EQ(dataset_to_json(generate_dataset(lti_config())),
            dataset_to_json(generate_dataset(lti_config())));
  EXPECT_EQ(dataset_to_json(generate_dataset(pendulum_config(0.0))),
            dataset_to_json(generate_dataset(pendulum_config(0.0))));
}

TEST(GenerateDataset, TrajectoryDependsOnlyOnItsIndex) {
  ExperimentConfig small = lti_config();
  small.sampling.M = 5;
  const Dataset a = generate_dataset(small);
  const Dataset b = generate_dataset(lti_config());
  for (int i = 0; i < 5; ++i) EXPECT_EQ(a.trajectories[i], b.trajectories[i]);
}

TEST(GenerateDataset, PendulumEquilibriumPersists) {
  ExperimentConfig cfg = pendulum_config(std::numbers::pi / 2);
  cfg.sampling.x0_bounds = {{std::numbers::pi / 2, std::numbers::pi / 2},
                            {0.0, 0.0}};
  cfg.sampling.reference_std = 0.0;
  const Dataset d = generate_dataset(cfg);
  for (const Trajectory& t : d.trajectories) {
    for (Eigen::Index k = 0; k < t.states.cols(); ++k) {
      EXPECT_NEAR(t.states(0, k), std::numbers::pi / 2, 1e-9);
      EXPECT_NEAR(t.states(1, k), 0.0, 1e-9);
    }
  }
}

TEST(GenerateDataset, LqrControllerFollowsRiccati) {
  ExperimentConfig cfg = lti_config();
  cfg.controller.kind = ControllerKind::kLqr;
  cfg.sampling.noise_std = 0.0;
  cfg.sampling.M = 3;
  const Dataset d = generate_dataset(cfg);
  EXPECT_EQ(d.meta.controller_id, "lqr");
  for (const Trajectory& t : d.trajectories) {
    const Trajectory ref =
        lqr_closed_loop(second_order(), mpc_weights(), t.states.col(0), 30);
    EXPECT_LT((t.states - ref.states).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(DeviationCoordinates, IdentityAndInverse) {
  const Dataset d = generate_dataset(pendulum_config(0.0));
  const OperatingPoint zero{Eigen::Vector2d::Zero(), Eigen::VectorXd::Zero(1)};
  const Dataset same = to_deviation_coordinates(d, zero);
  for (int i = 0; i < d.size(); ++i) {
    EXPECT_EQ(same.trajectories[i], d.trajectories[i]);
  }
  const OperatingPoint op{Eigen::Vector2d(0.3, -0.1),
                          Eigen::VectorXd::Constant(1, 0.7)};
  const OperatingPoint neg{-op.x_bar, -op.u_bar};
  const Dataset back =
      to_deviation_coordinates(to_deviation_coordinates(d, op), neg);
  for (int i = 0; i < d.size(); ++i) {
    EXPECT_LT((back.trajectories[i].states - d.trajectories[i].states)
                  .cwiseAbs()
                  .maxCoeff(),
              1e-14);
  }
}

TEST(DeviationCoordinates, HorizontalInputsCenterOnEquilibrium) {
  const Dataset d = generate_dataset(pendulum_config(std::numbers::pi / 2));
  ASSERT_TRUE(d.meta.operating_point.has_value());
  EXPECT_NEAR(d.meta.operating_point->u_bar(0), -0.676 * 9.81 * 0.45, 1e-12);
  const Dataset dev = to_deviation_coordinates(d, *d.meta.operating_point);
  EXPECT_TRUE(dev.meta.deviation_coordinates);
  double sum = 0.0;
  int count = 0;
  for (const Trajectory& t : dev.trajectories) {
    sum += t.inputs.sum();
    count += static_cast<int>(t.inputs.size());
  }
  EXPECT_LT(std::abs(sum / count), 0.3);
}

TEST(DatasetJson, RoundTripIsExact) {
  for (const ExperimentConfig& cfg : {lti_config(), pendulum_config(0.3)}) {
    Dataset d = generate_dataset(cfg);
    d.meta.created = "2026-03-01T12:00:00Z";
    EXPECT_EQ(dataset_from_json(dataset_to_json(d)), d);
    const fs::path p = temp_path("round_trip.json");
    save_dataset(d, p);
    EXPECT_EQ(load_dataset(p), d);
    fs::remove(p);
  }
}

TEST(DatasetJson, TruncatedFileIsAParseError) {
  const std::string text = dataset_to_json(generate_dataset(lti_config()));
  EXPECT_THROW(dataset_from_json(text.substr(0, text.size() / 2)), ParseError);
  EXPECT_THROW(load_dataset(temp_path("does_not_exist.json")), ParseError);
}

TEST(DatasetJson, SchemaViolationsAreValidationErrors) {
  Dataset d = generate_dataset(pendulum_config(0.0));
  d.trajectories[2].inputs = Eigen::MatrixXd::Zero(2, 29);
  EXPECT_THROW(dataset_from_json(dataset_to_json(d)), ValidationError);
}

TEST(TrajectoryCsv, RoundTripIsExact) {
  const Dataset d = generate_dataset(lti_config());
  EXPECT_EQ(trajectories_from_csv(trajectories_to_csv(d), d.meta), d);
  const fs::path p = temp_path("round_trip.csv");
  save_trajectories_csv(d, p);
  EXPECT_EQ(load_trajectories_csv(p, d.meta), d);
  fs::remove(p);
}

TEST(TrajectoryCsv, InputColumnMismatchNamesTrajectory) {
  Dataset d = generate_dataset(pendulum_config(0.0));
  std::string csv = trajectories_to_csv(d);
  // Drop the input field on one line of trajectory 3.
  const std::string key = "\n3,4,";
  const auto at = csv.find(key);
  ASSERT_NE(at, std::string::npos);
  const auto end = csv.find('\n', at + 1);
  const auto comma = csv.rfind(',', end);
  csv.erase(comma, end - comma);
  try {
    trajectories_from_csv(csv, d.meta);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("traj_id 3"), std::string::npos)
        << e.what();
  }
}

TEST(TrajectoryCsv, HeaderMustMatchMeta) {
  const Dataset d = generate_dataset(pendulum_config(0.0));
  DatasetMeta other = d.meta;
  other.plant = second_order();
  EXPECT_THROW(trajectories_from_csv(trajectories_to_csv(d), other),
               ValidationError);
}

TEST(ExperimentConfigJson, RoundTrip) {
  for (const ExperimentConfig& cfg : {lti_config(), pendulum_config(1.0)}) {
    const ExperimentConfig back =
        parse_experiment_config(experiment_config_to_json(cfg));
    EXPECT_EQ(experiment_config_to_json(back), experiment_config_to_json(cfg));
  }
}

TEST(ExperimentConfigJson, UnknownKeysAreListed) {
  std::string text = experiment_config_to_json(lti_config());
  text.insert(text.find('{') + 1, "\"colour\": 1, \"speed\": 2,");
  try {
    parse_experiment_config(text);
    FAIL() << "expected a config error";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("colour"), std::string::npos);
    EXPECT_NE(msg.find("speed"), std::string::npos);
  }
}

TEST(ExperimentConfigJson, SemanticErrors) {
  ExperimentConfig cfg = lti_config();
  cfg.sampling.M = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_THROW(parse_experiment_config(experiment_config_to_json(cfg)),
               ConfigError);
  cfg = lti_config();
  cfg.sampling.x0_bounds = {{-2, 2}};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = lti_config();
  cfg.controller.horizon = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_THROW(parse_experiment_config("{"), ConfigError);
}

TEST(IocConfigJson, BareOrEmbedded) {
  const IocConfig a = parse_ioc_config(
      R"({"structure": "diagonal", "normalization": "fix_r_scalar", "restarts": 2})");
  EXPECT_EQ(a.structure, Structure::kDiagonal);
  EXPECT_EQ(a.normalization, Normalization::kFixRScalar);
  EXPECT_EQ(a.restarts, 2);
  const IocConfig b = parse_ioc_config(experiment_config_to_json(lti_config()));
  EXPECT_EQ(b, lti_config().ioc);
  EXPECT_THROW(parse_ioc_config(R"({"structure": "banded"})"), ConfigError);
  EXPECT_THROW(parse_ioc_config(R"({"restart": 2})"), ConfigError);
}

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.98422, 1e-300, 123456789.123456789}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

}  // namespace
}  // namespace invlqr
