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
#ifndef INVLQR_CLI_COMMANDS_HPP
#define INVLQR_CLI_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "invlqr/control.hpp"
#include "invlqr/data_io.hpp"
#include "invlqr/ioc.hpp"

namespace invlqr::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // validate only
inline constexpr int kExitInput = 2;
inline constexpr int kExitDivergence = 3;
inline constexpr int kExitSolver = 4;

struct ComparisonRmse {
  double lqr_with_hat = 0.0;
  std::optional<double> lqr_with_mpc_weights;
};

struct Report {
  std::string experiment_id;
  Eigen::MatrixXd q_hat;
  Eigen::MatrixXd r_hat;
  std::optional<CostWeights> baselines;  // (Q_MPC, R_MPC) when known
  double fit_rmse_vs_data = 0.0;
  ComparisonRmse comparison_rmse;
  double runtime_s = 0.0;

  // Not part of the headline result.
  IocConfig ioc;
  IocResult ioc_result;
  // Case-specific derived quantities, already JSON-encoded.
  std::string findings_json = "{}";
};

/// Report JSON: keys experiment_id, q_hat, r_hat, baselines ({q_mpc, r_mpc}
/// or null), fit_rmse_vs_data, comparison_rmse {lqr_with_hat,
/// lqr_with_mpc_weights}, runtime_s, diagnostics, findings. Matrices are
/// row-major nested arrays.
std::string report_to_json(const Report& report);

/// RMS over every state component and step k >= 1 between the data and the
/// finite-horizon LQR trajectories under `w` started from each x_d(0).
double lqr_rmse(const LinearSystem& sys, const CostWeights& w,
                const Dataset& data);

/// Linear model and regulation-to-zero data the explanation runs on: the
/// dataset's own (A, B) for LTI plants, otherwise a least-squares fit on
/// deviation coordinates around meta.operating_point.
struct ExplanationProblem {
  LinearSystem system;
  Dataset data;
};
ExplanationProblem prepare_explanation(const Dataset& data);

/// Solves the IOC for an explanation problem and fills a Report.
Report explain(const ExplanationProblem& problem, const IocConfig& cfg,
               const std::string& experiment_id,
               const std::optional<CostWeights>& baselines = std::nullopt);

struct ExplainOverrides {
  std::optional<Structure> structure;
  std::optional<Structure> r_structure;
  std::optional<Normalization> normalization;
};

/// `invlqr generate`: writes the dataset bundle (and optionally the CSV).
int cmd_generate(const std::filesystem::path& config_path,
                 const std::filesystem::path& out_path,
                 const std::optional<std::filesystem::path>& csv_path,
                 std::ostream& err);

/// `invlqr explain`. Without an IOC config file the defaults are used.
int cmd_explain(const std::filesystem::path& dataset_path,
                const std::optional<std::filesystem::path>& ioc_config_path,
                const std::filesystem::path& out_report_path,
                const ExplainOverrides& overrides, std::ostream& err);

enum class Case { kLtiT5, kLtiT10, kPendulumUpright, kPendulumHorizontal };

std::string to_string(Case c);
/// Throws ConfigError for unknown names.
Case parse_case(const std::string& name);
/// Fixed default seed of each case.
std::uint64_t default_seed(Case c);
/// Built-in configuration of a case.
ExperimentConfig case_config(Case c, std::uint64_t seed);

/// Everything cmd_reproduce computes, before it is written to disk.
struct Reproduction {
  ExperimentConfig config;
  Dataset dataset;
  Report report;
  std::optional<Report> diagonal_report;  // pendulum cases
  std::string plot_csv;
};
Reproduction reproduce(Case c, std::uint64_t seed);

/// `invlqr reproduce`: writes config.json, dataset.json, report.json,
/// plot.csv (and report_diagonal.json for pendulum cases) into out_dir.
int cmd_reproduce(Case c, std::uint64_t seed,
                  const std::filesystem::path& out_dir, std::ostream& err);

struct ValidateOptions {
  std::uint64_t seed = 7;
  bool quick = false;
  bool perturb_riccati = false;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured quantity
  double threshold = 0.0;  // bound it was compared against
  std::string detail;
};

std::vector<CheckResult> run_validation(const ValidateOptions& opts);

/// `invlqr validate`: prints a JSON summary to `out`; exit 0 iff every
/// check passed, 1 otherwise.
int cmd_validate(const ValidateOptions& opts, std::ostream& out,
                 std::ostream& err);

}  // namespace invlqr::cli

#endif  // INVLQR_CLI_COMMANDS_HPP
