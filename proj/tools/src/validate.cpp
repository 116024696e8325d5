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
#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>

#include <json.hpp>

#include "invlqr/data_io.hpp"
#include "invlqr/systems.hpp"
#include "invlqr_cli/commands.hpp"
#include "invlqr_cli/workloads.hpp"
#include "guarded.hpp"

namespace invlqr::cli {
namespace {

using json = nlohmann::json;

CheckResult below(std::string name, double value, double threshold,
                  std::string detail = {}) {
  return {std::move(name), std::isfinite(value) && value < threshold, value,
          threshold, std::move(detail)};
}

double max_abs(const Eigen::MatrixXd& M) {
  return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

CostWeights truth_weights() {
  return {Eigen::Vector2d(0.3, 0.1).asDiagonal(),
          Eigen::MatrixXd::Identity(2, 2)};
}

CheckResult pmp_riccati_equivalence(const ValidateOptions& opts) {
  CounterRng rng(opts.seed, 100);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const LqInstance inst = random_lq_instance(rng);
    CostWeights riccati_w = inst.weights;
    if (opts.perturb_riccati) riccati_w.Q *= 1.001;
    const PmpSolution a =
        reconstruct_pmp_trajectory(inst.system, riccati_w, inst.x0, inst.N);
    const PmpSolution b =
        solve_pmp_boundary_value(inst.system, inst.weights, inst.x0, inst.N);
    worst = std::max({worst,
                      max_abs(a.trajectory.states - b.trajectory.states),
                      max_abs(a.trajectory.inputs - b.trajectory.inputs),
                      max_abs(a.adjoint.lambdas - b.adjoint.lambdas)});
  }
  return below("pmp_riccati_equivalence", worst, 1e-8,
               "max elementwise gap over 50 random instances");
}

CheckResult pmp_residuals(const ValidateOptions& opts) {
  CounterRng rng(opts.seed, 101);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const LqInstance inst = random_lq_instance(rng);
    const auto& A = inst.system.A();
    const auto& B = inst.system.B();
    const auto& Q = inst.weights.Q;
    const auto& R = inst.weights.R;
    const PmpSolution s =
        reconstruct_pmp_trajectory(inst.system, inst.weights, inst.x0, inst.N);
    const auto& x = s.trajectory.states;
    const auto& u = s.trajectory.inputs;
    const auto& lam = s.adjoint.lambdas;
    double scale = 1.0 + max_abs(x) + max_abs(lam);
    worst = std::max(worst, max_abs(x.col(0) - inst.x0) / scale);
    worst = std::max(worst, max_abs(lam.col(inst.N - 1)) / scale);
    for (int k = 0; k + 1 < inst.N; ++k) {
      worst = std::max(
          worst, max_abs(x.col(k + 1) - A * x.col(k) - B * u.col(k)) / scale);
      worst = std::max(worst, max_abs(R * u.col(k) +
                                      B.transpose() * lam.col(k + 1)) /
                                  scale);
      worst = std::max(worst, max_abs(lam.col(k) - A.transpose() *
                                                       lam.col(k + 1) -
                                      Q * x.col(k)) /
                                  scale);
    }
  }
  return below("pmp_residuals", worst, 1e-10,
               "scaled residual of the optimality conditions");
}

CheckResult objective_scale_invariance(const ValidateOptions& opts) {
  const LinearSystem sys = second_order_system();
  const Dataset data = lqr_dataset(sys, truth_weights(), 10, 30, 0.01,
                                   opts.seed);
  const CostWeights w{Eigen::Matrix2d{{0.5, 0.1}, {0.1, 0.2}},
                      Eigen::Vector2d(1.3, 0.7).asDiagonal()};
  const double base = ioc_objective(sys, w, data);
  double worst = 0.0;
  for (double alpha : {1e-2, 1e2}) {
    const double scaled =
        ioc_objective(sys, {alpha * w.Q, alpha * w.R}, data);
    worst = std::max(worst, std::abs(scaled - base) / std::abs(base));
  }
  return below("objective_scale_invariance", worst, 1e-10,
               "relative change for alpha in {1e-2, 1e2}");
}

CheckResult normalize_idempotence(const ValidateOptions& opts) {
  CounterRng rng(opts.seed, 102);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const LqInstance inst = random_lq_instance(rng);
    for (Normalization mode :
         {Normalization::kTraceR, Normalization::kFixRScalar}) {
      if (mode == Normalization::kFixRScalar &&
          inst.system.input_dim() != 1) {
        continue;
      }
      const CostWeights once = normalize_weights(inst.weights, mode);
      const CostWeights twice = normalize_weights(once, mode);
      worst = std::max({worst, max_abs(twice.Q - once.Q) /
                                   std::max(1.0, max_abs(once.Q)),
                        max_abs(twice.R - once.R) /
                            std::max(1.0, max_abs(once.R))});
    }
  }
  return {"normalize_idempotence", worst <= 1e-14, worst, 1e-14,
          "max relative change of a second normalization"};
}

Dataset round_trip_sample(std::uint64_t seed) {
  Dataset data = lqr_dataset(second_order_system(), truth_weights(), 4, 12,
                             0.01, seed);
  data.meta.created = "2026-01-01T00:00:00Z";
  return data;
}

CheckResult json_round_trip(const ValidateOptions& opts) {
  const Dataset data = round_trip_sample(opts.seed);
  const Dataset back = dataset_from_json(dataset_to_json(data));
  const bool same = back == data;
  return {"json_round_trip", same, same ? 0.0 : 1.0, 0.0,
          "save/load reproduces the dataset exactly"};
}

CheckResult csv_round_trip(const ValidateOptions& opts) {
  const Dataset data = round_trip_sample(opts.seed);
  const Dataset back = trajectories_from_csv(trajectories_to_csv(data),
                                             data.meta);
  const bool same = back == data;
  return {"csv_round_trip", same, same ? 0.0 : 1.0, 0.0,
          "CSV export/import reproduces the trajectories exactly"};
}

CheckResult noiseless_recovery(const ValidateOptions& opts) {
  const CostWeights truth = truth_weights();
  const LinearSystem sys = second_order_system();
  const Dataset data = lqr_dataset(sys, truth, 10, 30, 0.0, opts.seed);
  IocConfig cfg;
  cfg.seed = opts.seed;
  const IocResult res = solve_ioc(sys, data, cfg);
  const RecoveryError e = recovery_error(truth, res.Q_hat, res.R_hat);
  return below("noiseless_recovery", e.max(), 1e-3,
               "relative Frobenius error of (Q_hat, R_hat)");
}

CheckResult sysid_noiseless(const ValidateOptions& opts) {
  const LinearSystem sys = second_order_system();
  const LtiPlant plant(sys);
  CounterRng excitation(opts.seed, 103);
  std::vector<double> dither;
  for (int i = 0; i < 2 * 40 * 5; ++i) dither.push_back(excitation.gaussian());
  Dataset data;
  data.meta.plant = sys;
  const auto x0s = sample_initial_conditions({{-2, 2}, {-2, 2}}, 5, opts.seed);
  const Eigen::MatrixXd K = mpc_gain_lti(sys, truth_weights(), 10);
  for (int i = 0; i < 5; ++i) {
    const Policy policy = [&, i](int k, const Eigen::VectorXd& y) {
      const std::size_t at = static_cast<std::size_t>(2 * (40 * i + k));
      return Eigen::VectorXd(-K * y +
                             Eigen::Vector2d(dither[at], dither[at + 1]));
    };
    data.trajectories.push_back(
        simulate_closed_loop(plant, policy, x0s[i], 40, 0.0, opts.seed));
  }
  const LinearSystem fit = estimate_linear_system(data);
  const double err = std::max(max_abs(fit.A() - sys.A()),
                              max_abs(fit.B() - sys.B()));
  return below("sysid_noiseless", err, 1e-9,
               "max-abs error of the least-squares fit on exact data");
}

CheckResult gradient_check(const ValidateOptions& opts) {
  const LinearSystem sys = second_order_system();
  const Dataset data = lqr_dataset(sys, truth_weights(), 6, 20, 0.01,
                                   opts.seed);
  const CostWeights w{Eigen::Matrix2d{{0.4, 0.05}, {0.05, 0.2}},
                      Eigen::Matrix2d{{1.1, 0.1}, {0.1, 0.9}}};
  const WeightGradient g = ioc_objective_gradient(sys, w, data);
  double worst = 0.0;
  double scale = std::max(max_abs(g.dQ), max_abs(g.dR));
  const double h = 1e-6;
  auto probe = [&](bool on_q, int i, int j) {
    CostWeights plus = w;
    CostWeights minus = w;
    Eigen::MatrixXd& P = on_q ? plus.Q : plus.R;
    Eigen::MatrixXd& M = on_q ? minus.Q : minus.R;
    P(i, j) += h;
    M(i, j) -= h;
    if (i != j) {
      P(j, i) += h;
      M(j, i) -= h;
    }
    const double fd =
        (ioc_objective(sys, plus, data) - ioc_objective(sys, minus, data)) /
        (2.0 * h);
    const Eigen::MatrixXd& G = on_q ? g.dQ : g.dR;
    const double analytic = i == j ? G(i, j) : G(i, j) + G(j, i);
    worst = std::max(worst, std::abs(fd - analytic) / scale);
  };
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j <= i; ++j) {
      probe(true, i, j);
      probe(false, i, j);
    }
  }
  return below("gradient_check", worst, 1e-5,
               "analytic vs central-difference objective gradient");
}

CheckResult m_consistency(const ValidateOptions& opts) {
  const CostWeights truth = truth_weights();
  const LinearSystem sys = second_order_system();
  IocConfig cfg;
  cfg.gradient_mode = GradientMode::kAnalytic;
  cfg.restarts = 1;
  std::vector<double> means;
  for (int M : {5, 15, 30}) {
    double sum = 0.0;
    for (int s = 0; s < 5; ++s) {
      const std::uint64_t seed = opts.seed * 1000 + 97 * s;
      const Dataset data = lqr_dataset(sys, truth, M, 30, 0.01, seed);
      cfg.seed = seed;
      const IocResult res = solve_ioc(sys, data, cfg);
      sum += recovery_error(truth, res.Q_hat, res.R_hat).max();
    }
    means.push_back(sum / 5.0);
  }
  const double worst =
      std::max(means[1] / means[0], means[2] / means[1]);
  std::string detail = "mean error for M = 5, 15, 30:";
  for (double m : means) detail += " " + format_double(m);
  return {"m_consistency", worst <= 1.2, worst, 1.2, detail};
}

CheckResult generation_determinism(const ValidateOptions& opts) {
  ExperimentConfig cfg = case_config(Case::kPendulumUpright, opts.seed);
  cfg.sampling.M = 3;
  cfg.sampling.N = 15;
  const std::string a = dataset_to_json(generate_dataset(cfg));
  const std::string b = dataset_to_json(generate_dataset(cfg));
  ExperimentConfig lti = case_config(Case::kLtiT10, opts.seed);
  lti.sampling.M = 5;
  const std::string c = dataset_to_json(generate_dataset(lti));
  const std::string d = dataset_to_json(generate_dataset(lti));
  const bool same = a == b && c == d;
  return {"generation_determinism", same, same ? 0.0 : 1.0, 0.0,
          "identical bundles from repeated generation"};
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidateOptions& opts) {
  using Check = std::function<CheckResult(const ValidateOptions&)>;
  std::vector<Check> checks = {
      pmp_riccati_equivalence, pmp_residuals,  objective_scale_invariance,
      normalize_idempotence,   json_round_trip, csv_round_trip,
      noiseless_recovery,      sysid_noiseless, gradient_check};
  if (!opts.quick) {
    checks.push_back(m_consistency);
    checks.push_back(generation_determinism);
  }
  std::vector<CheckResult> results;
  for (const Check& check : checks) results.push_back(check(opts));
  return results;
}

int cmd_validate(const ValidateOptions& opts, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const std::vector<CheckResult> results = run_validation(opts);
    json checks = json::array();
    json failed = json::array();
    for (const CheckResult& r : results) {
      checks.push_back({{"name", r.name},
                        {"passed", r.passed},
                        {"value", r.value},
                        {"threshold", r.threshold},
                        {"detail", r.detail}});
      if (!r.passed) failed.push_back(r.name);
    }
    const json summary = {{"seed", opts.seed},
                          {"quick", opts.quick},
                          {"passed", failed.empty()},
                          {"failed", failed},
                          {"checks", checks}};
    out << summary.dump(2) << '\n';
    for (const auto& name : failed) {
      err << "check failed: " << name.get<std::string>() << '\n';
    }
    return failed.empty() ? kExitOk : kExitCheckFailed;
  });
}

}  // namespace invlqr::cli
