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
#include "invlqr_cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "invlqr/errors.hpp"
#include "invlqr/systems.hpp"
#include "guarded.hpp"

namespace invlqr::cli {
namespace {

using json = nlohmann::json;

json matrix_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string report_to_json(const Report& r) {
  json baselines = nullptr;
  if (r.baselines) {
    baselines = {{"q_mpc", matrix_json(r.baselines->Q)},
                 {"r_mpc", matrix_json(r.baselines->R)}};
  }
  json mpc_rmse = nullptr;
  if (r.comparison_rmse.lqr_with_mpc_weights) {
    mpc_rmse = *r.comparison_rmse.lqr_with_mpc_weights;
  }
  const json j = {
      {"experiment_id", r.experiment_id},
      {"q_hat", matrix_json(r.q_hat)},
      {"r_hat", matrix_json(r.r_hat)},
      {"baselines", baselines},
      {"fit_rmse_vs_data", r.fit_rmse_vs_data},
      {"comparison_rmse",
       {{"lqr_with_hat", r.comparison_rmse.lqr_with_hat},
        {"lqr_with_mpc_weights", mpc_rmse}}},
      {"runtime_s", r.runtime_s},
      {"diagnostics",
       {{"objective", r.ioc_result.objective},
        {"iterations", r.ioc_result.iterations},
        {"restarts_used", r.ioc_result.restarts_used},
        {"converged", r.ioc_result.converged},
        {"gradient_norm", r.ioc_result.gradient_norm},
        {"per_trajectory_rmse", r.ioc_result.per_trajectory_rmse},
        {"structure", to_string(r.ioc.structure)},
        {"r_structure", to_string(r.ioc.r_structure)},
        {"normalization", to_string(r.ioc.normalization)}}},
      {"findings", json::parse(r.findings_json)}};
  return j.dump(2) + "\n";
}

double lqr_rmse(const LinearSystem& sys, const CostWeights& w,
                const Dataset& data) {
  const std::vector<double> errors = ioc_squared_errors(sys, w, data);
  double total = 0.0;
  double count = 0.0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    total += errors[i];
    count += static_cast<double>((data.trajectories[i].length() - 1) *
                                 sys.state_dim());
  }
  return std::sqrt(total / count);
}

ExplanationProblem prepare_explanation(const Dataset& data) {
  if (data.empty()) throw ValidationError("dataset has no trajectories");
  Dataset local = data;
  if (data.meta.operating_point && !data.meta.deviation_coordinates) {
    local = to_deviation_coordinates(data, *data.meta.operating_point);
  }
  if (const auto* sys = std::get_if<LinearSystem>(&data.meta.plant)) {
    return {*sys, std::move(local)};
  }
  LinearSystem fitted = estimate_linear_system(local);
  return {std::move(fitted), std::move(local)};
}

Report explain(const ExplanationProblem& problem, const IocConfig& cfg,
               const std::string& experiment_id,
               const std::optional<CostWeights>& baselines) {
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.experiment_id = experiment_id;
  r.ioc = cfg;
  r.ioc_result = solve_ioc(problem.system, problem.data, cfg);
  r.q_hat = r.ioc_result.Q_hat;
  r.r_hat = r.ioc_result.R_hat;
  r.baselines = baselines;

  const CostWeights hat{r.q_hat, r.r_hat};
  r.comparison_rmse.lqr_with_hat = lqr_rmse(problem.system, hat, problem.data);
  if (baselines) {
    r.comparison_rmse.lqr_with_mpc_weights =
        lqr_rmse(problem.system, *baselines, problem.data);
  }
  double total = 0.0;
  double count = 0.0;
  for (std::size_t i = 0; i < r.ioc_result.per_trajectory_rmse.size(); ++i) {
    const double c = static_cast<double>(
        (problem.data.trajectories[i].length() - 1) *
        problem.system.state_dim());
    total += r.ioc_result.per_trajectory_rmse[i] *
             r.ioc_result.per_trajectory_rmse[i] * c;
    count += c;
  }
  r.fit_rmse_vs_data = std::sqrt(total / count);
  r.runtime_s = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return r;
}

int cmd_generate(const std::filesystem::path& config_path,
                 const std::filesystem::path& out_path,
                 const std::optional<std::filesystem::path>& csv_path,
                 std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load_experiment_config(config_path);
    Dataset data = generate_dataset(cfg);
    data.meta.created = utc_now();
    save_dataset(data, out_path);
    if (csv_path) save_trajectories_csv(data, *csv_path);
    return kExitOk;
  });
}

int cmd_explain(const std::filesystem::path& dataset_path,
                const std::optional<std::filesystem::path>& ioc_config_path,
                const std::filesystem::path& out_report_path,
                const ExplainOverrides& overrides, std::ostream& err) {
  return guarded(err, [&] {
    const Dataset data = load_dataset(dataset_path);
    IocConfig cfg;
    if (ioc_config_path) cfg = load_ioc_config(*ioc_config_path);
    if (overrides.structure) cfg.structure = *overrides.structure;
    if (overrides.r_structure) cfg.r_structure = *overrides.r_structure;
    if (overrides.normalization) cfg.normalization = *overrides.normalization;
    cfg.validate(data.input_dim());

    const ExplanationProblem problem = prepare_explanation(data);
    const Report report =
        explain(problem, cfg, dataset_path.stem().string());
    if (!report.ioc_result.converged) {
      err << "error: the inverse problem did not converge on any start "
             "(gradient norm "
          << report.ioc_result.gradient_norm << ")\n";
      return kExitSolver;
    }
    std::ofstream out(out_report_path, std::ios::binary);
    if (!out) throw ArgumentError("cannot write '" + out_report_path.string() + "'");
    out << report_to_json(report);
    return kExitOk;
  });
}

}  // namespace invlqr::cli
