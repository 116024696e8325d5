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
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "invlqr/errors.hpp"
#include "invlqr/systems.hpp"
#include "invlqr_cli/commands.hpp"
#include "guarded.hpp"

namespace invlqr::cli {
namespace {

using json = nlohmann::json;

LinearSystem lti_plant() {
  Eigen::MatrixXd A(2, 2);
  A << 1.0, 1.0, -0.5, 1.0;
  return LinearSystem(A, 0.5 * Eigen::MatrixXd::Identity(2, 2));
}

ExperimentConfig lti_config(int horizon, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.plant = lti_plant();
  cfg.controller.kind = ControllerKind::kMpc;
  cfg.controller.horizon = horizon;
  cfg.controller.weights.Q = Eigen::Vector2d(0.3, 0.1).asDiagonal();
  cfg.controller.weights.R = Eigen::MatrixXd::Identity(2, 2);
  cfg.sampling.M = 30;
  cfg.sampling.N = 30;
  cfg.sampling.x0_bounds = {{-2.0, 2.0}, {-2.0, 2.0}};
  cfg.sampling.noise_std = 0.01;
  cfg.sampling.seed = seed;
  cfg.ioc.structure = Structure::kFull;
  cfg.ioc.r_structure = Structure::kDiagonal;
  cfg.ioc.normalization = Normalization::kTraceR;
  cfg.ioc.seed = seed;
  return cfg;
}

ExperimentConfig pendulum_config(double theta_bar, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.plant = PendulumParams{};
  cfg.controller.kind = ControllerKind::kMpc;
  cfg.controller.horizon = 5;
  cfg.controller.weights.Q = Eigen::Vector2d(1000.0, 100.0).asDiagonal();
  cfg.controller.weights.R = Eigen::MatrixXd::Identity(1, 1);
  cfg.controller.theta_bar = theta_bar;
  cfg.sampling.M = 30;
  cfg.sampling.N = 50;
  cfg.sampling.x0_bounds = {{theta_bar - 0.3, theta_bar + 0.3}, {-0.3, 0.3}};
  cfg.sampling.noise_std = 0.0;
  cfg.sampling.reference_std = 0.05;
  cfg.sampling.seed = seed;
  cfg.ioc.structure = Structure::kFull;
  cfg.ioc.r_structure = Structure::kDiagonal;
  cfg.ioc.normalization = Normalization::kFixRScalar;
  cfg.ioc.seed = seed;
  return cfg;
}

bool is_pendulum(Case c) {
  return c == Case::kPendulumUpright || c == Case::kPendulumHorizontal;
}

double frobenius_ratio(const Report& r) {
  return r.q_hat.norm() / r.r_hat.norm();
}

void append_series(std::string& csv, const std::string& name,
                   const Eigen::MatrixXd& states) {
  for (Eigen::Index k = 0; k < states.cols(); ++k) {
    csv += std::to_string(k) + ',' + name + ',' + format_double(states(0, k)) +
           ',' + format_double(states(1, k)) + '\n';
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

std::string to_string(Case c) {
  switch (c) {
    case Case::kLtiT5: return "lti_t5";
    case Case::kLtiT10: return "lti_t10";
    case Case::kPendulumUpright: return "pendulum_upright";
    case Case::kPendulumHorizontal: return "pendulum_horizontal";
  }
  return "unknown";
}

Case parse_case(const std::string& name) {
  for (Case c : {Case::kLtiT5, Case::kLtiT10, Case::kPendulumUpright,
                 Case::kPendulumHorizontal}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("unknown case '" + name +
                    "' (expected lti_t5, lti_t10, pendulum_upright or "
                    "pendulum_horizontal)");
}

std::uint64_t default_seed(Case c) {
  return is_pendulum(c) ? 1 : 1;
}

ExperimentConfig case_config(Case c, std::uint64_t seed) {
  switch (c) {
    case Case::kLtiT5: return lti_config(5, seed);
    case Case::kLtiT10: return lti_config(10, seed);
    case Case::kPendulumUpright: return pendulum_config(0.0, seed);
    case Case::kPendulumHorizontal:
      return pendulum_config(std::numbers::pi / 2.0, seed);
  }
  throw ConfigError("unknown case");
}

Reproduction reproduce(Case c, std::uint64_t seed) {
  Reproduction rep;
  rep.config = case_config(c, seed);
  rep.config.validate();
  rep.dataset = generate_dataset(rep.config);

  const ExplanationProblem problem = prepare_explanation(rep.dataset);
  const CostWeights mpc = rep.config.controller.weights;
  const std::string id = to_string(c) + "_seed" + std::to_string(seed);
  rep.report = explain(problem, rep.config.ioc, id, mpc);
  if (!rep.report.ioc_result.converged) {
    throw SolverError("inverse problem did not converge on any start",
                      rep.report.ioc_result.gradient_norm);
  }

  json findings;
  const Report& r = rep.report;
  if (c == Case::kLtiT10) {
    Eigen::Matrix2d q_ref;
    q_ref << 0.265, 0.015, 0.015, 0.112;
    const Eigen::Matrix2d r_ref = Eigen::Vector2d(0.988, 1.012).asDiagonal();
    findings = {
        {"q_hat_max_abs_deviation_from_reference",
         (r.q_hat - q_ref).cwiseAbs().maxCoeff()},
        {"r_hat_max_abs_deviation_from_reference",
         (r.r_hat - r_ref).cwiseAbs().maxCoeff()},
        {"q_hat_distance_to_q_mpc", (r.q_hat - mpc.Q).norm()},
        {"q_over_r_frobenius_ratio", frobenius_ratio(r)}};
  } else if (c == Case::kLtiT5) {
    // The horizon comparison needs the T = 10 explanation of the same draw.
    ExperimentConfig companion = lti_config(10, seed);
    const Dataset companion_data = generate_dataset(companion);
    const Report r10 = explain(prepare_explanation(companion_data),
                               companion.ioc, "lti_t10_companion", mpc);
    const double ratio = frobenius_ratio(r);
    const double ratio10 = frobenius_ratio(r10);
    findings = {
        {"q_over_r_frobenius_ratio", ratio},
        {"t10_q_over_r_frobenius_ratio", ratio10},
        {"ratio_reduction_factor", ratio10 / ratio},
        {"less_aggressive_than_t10", ratio10 / ratio > 3.0},
        {"weights_second_state_more", r.q_hat(1, 1) > r.q_hat(0, 0)},
        {"hat_closer_than_mpc_weights",
         r.comparison_rmse.lqr_with_hat <
             r.comparison_rmse.lqr_with_mpc_weights.value_or(0.0)}};
  }

  if (is_pendulum(c)) {
    IocConfig diag_cfg = rep.config.ioc;
    diag_cfg.structure = Structure::kDiagonal;
    rep.diagonal_report = explain(problem, diag_cfg, id + "_diagonal", mpc);
    const Report& d = *rep.diagonal_report;
    const auto& p = std::get<PendulumParams>(rep.config.plant);
    const LinearSystem truth =
        pendulum_linearize(p, rep.config.controller.theta_bar);
    const double sysid_error =
        std::max((problem.system.A() - truth.A()).cwiseAbs().maxCoeff(),
                 (problem.system.B() - truth.B()).cwiseAbs().maxCoeff());
    findings = {
        {"theta_bar", rep.config.controller.theta_bar},
        {"trace_q_hat", r.q_hat.trace()},
        {"trace_q_hat_diagonal", d.q_hat.trace()},
        {"objective_full", r.ioc_result.objective},
        {"objective_diagonal", d.ioc_result.objective},
        {"rmse_full", r.comparison_rmse.lqr_with_hat},
        {"rmse_diagonal", d.comparison_rmse.lqr_with_hat},
        {"full_fits_better_than_diagonal",
         r.ioc_result.objective < d.ioc_result.objective &&
             r.comparison_rmse.lqr_with_hat < d.comparison_rmse.lqr_with_hat},
        {"sysid_max_abs_error_vs_linearization", sysid_error}};
  }
  rep.report.findings_json = findings.is_null() ? "{}" : findings.dump();

  // Trajectory 0, in the coordinates the explanation was computed in.
  const Trajectory& measured = problem.data.trajectories.front();
  const Eigen::VectorXd x0 = measured.states.col(0);
  const int N = measured.length();
  std::string csv = "k,series,x0,x1\n";
  append_series(csv, "measured", measured.states);
  append_series(csv, "lqr_mpc_weights",
                lqr_closed_loop(problem.system, mpc, x0, N).states);
  append_series(csv, "lqr_hat",
                lqr_closed_loop(problem.system, {r.q_hat, r.r_hat}, x0, N)
                    .states);
  if (rep.diagonal_report) {
    append_series(csv, "lqr_hat_diagonal",
                  lqr_closed_loop(problem.system,
                                  {rep.diagonal_report->q_hat,
                                   rep.diagonal_report->r_hat},
                                  x0, N)
                      .states);
  }
  rep.plot_csv = std::move(csv);
  return rep;
}

int cmd_reproduce(Case c, std::uint64_t seed,
                  const std::filesystem::path& out_dir, std::ostream& err) {
  return guarded(err, [&] {
    const Reproduction rep = reproduce(c, seed);
    std::filesystem::create_directories(out_dir);
    write_text(out_dir / "config.json", experiment_config_to_json(rep.config));
    write_text(out_dir / "dataset.json", dataset_to_json(rep.dataset));
    write_text(out_dir / "report.json", report_to_json(rep.report));
    if (rep.diagonal_report) {
      write_text(out_dir / "report_diagonal.json",
                 report_to_json(*rep.diagonal_report));
    }
    write_text(out_dir / "plot.csv", rep.plot_csv);
    return kExitOk;
  });
}

}  // namespace invlqr::cli
