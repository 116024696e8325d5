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
#include "invlqr/ioc.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>

#include "invlqr/bfgs.hpp"
#include "invlqr/errors.hpp"
#include "invlqr/rng.hpp"

namespace invlqr {

// ---------------------------------------------------------------------------
// Enumerations

std::string to_string(Structure s) {
  return s == Structure::kFull ? "full" : "diagonal";
}

std::string to_string(Normalization n) {
  return n == Normalization::kTraceR ? "trace_r" : "fix_r_scalar";
}

std::string to_string(GradientMode g) {
  return g == GradientMode::kFiniteDifference ? "finite_difference"
                                              : "analytic";
}

Structure parse_structure(const std::string& s) {
  if (s == "full") return Structure::kFull;
  if (s == "diagonal") return Structure::kDiagonal;
  throw ConfigError("unknown structure '" + s + "' (expected full|diagonal)");
}

Normalization parse_normalization(const std::string& s) {
  if (s == "trace_r") return Normalization::kTraceR;
  if (s == "fix_r_scalar") return Normalization::kFixRScalar;
  throw ConfigError("unknown normalization '" + s +
                    "' (expected trace_r|fix_r_scalar)");
}

GradientMode parse_gradient_mode(const std::string& s) {
  if (s == "finite_difference") return GradientMode::kFiniteDifference;
  if (s == "analytic") return GradientMode::kAnalytic;
  throw ConfigError("unknown gradient_mode '" + s +
                    "' (expected finite_difference|analytic)");
}

void IocConfig::validate(int input_dim) const {
  if (restarts < 1) throw ConfigError("ioc: restarts must be >= 1");
  if (max_iterations < 1) throw ConfigError("ioc: max_iterations must be >= 1");
  if (!(objective_tolerance > 0.0) || !(gradient_tolerance > 0.0)) {
    throw ConfigError("ioc: tolerances must be > 0");
  }
  if (normalization == Normalization::kFixRScalar && input_dim != 1) {
    throw ConfigError("ioc: fix_r_scalar needs a scalar input, got m = " +
                      std::to_string(input_dim));
  }
}

// ---------------------------------------------------------------------------
// Forward reconstruction

PmpSolution reconstruct_pmp_trajectory(const LinearSystem& sys,
                                       const CostWeights& w,
                                       const Eigen::VectorXd& x_bar, int N) {
  if (x_bar.size() != sys.state_dim()) {
    throw ArgumentError("reconstruct_pmp_trajectory: x_bar dimension mismatch");
  }
  const GainSchedule s = riccati_solve(sys, w, N);
  PmpSolution sol;
  Trajectory& t = sol.trajectory;
  t.states.resize(sys.state_dim(), N);
  t.inputs.resize(sys.input_dim(), N - 1);
  sol.adjoint.lambdas.resize(sys.state_dim(), N);

  t.states.col(0) = x_bar;
  for (int k = 0; k + 1 < N; ++k) {
    t.inputs.col(k) = -s.gains[k] * t.states.col(k);
    t.states.col(k + 1) = sys.A() * t.states.col(k) + sys.B() * t.inputs.col(k);
  }
  for (int k = 0; k < N; ++k) {
    sol.adjoint.lambdas.col(k) = s.value_matrices[k] * t.states.col(k);
  }
  return sol;
}

namespace {

void check_dataset(const LinearSystem& sys, const Dataset& data,
                   const char* who) {
  if (data.empty()) {
    throw ArgumentError(std::string(who) + ": empty dataset");
  }
  for (std::size_t i = 0; i < data.trajectories.size(); ++i) {
    const Trajectory& t = data.trajectories[i];
    if (t.state_dim() != sys.state_dim() || t.input_dim() != sys.input_dim() ||
        t.length() < 2) {
      throw ArgumentError(std::string(who) + ": trajectory " +
                          std::to_string(i) + " does not match the system");
    }
  }
}

// Trajectory indices grouped by length, so one Riccati sweep serves all
// trajectories of the same horizon.
std::map<int, std::vector<std::size_t>> by_length(const Dataset& data) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < data.trajectories.size(); ++i) {
    groups[data.trajectories[i].length()].push_back(i);
  }
  return groups;
}

Eigen::MatrixXd closed_loop(const LinearSystem& sys, const Eigen::MatrixXd& K) {
  return sys.A() - sys.B() * K;
}

}  // namespace

std::vector<double> ioc_squared_errors(const LinearSystem& sys,
                                       const CostWeights& w,
                                       const Dataset& data) {
  check_dataset(sys, data, "ioc_objective");
  std::vector<double> errors(data.trajectories.size(), 0.0);
  for (const auto& [N, members] : by_length(data)) {
    const GainSchedule s = riccati_solve(sys, w, N);
    std::vector<Eigen::MatrixXd> F(N - 1);
    for (int k = 0; k + 1 < N; ++k) F[k] = closed_loop(sys, s.gains[k]);
    for (std::size_t i : members) {
      const Eigen::MatrixXd& d = data.trajectories[i].states;
      Eigen::VectorXd x = d.col(0);
      double e = 0.0;
      for (int k = 0; k + 1 < N; ++k) {
        x = F[k] * x;
        e += (d.col(k + 1) - x).squaredNorm();
      }
      errors[i] = e;
    }
  }
  return errors;
}

double ioc_objective(const LinearSystem& sys, const CostWeights& w,
                     const Dataset& data) {
  const std::vector<double> errors = ioc_squared_errors(sys, w, data);
  double sum = 0.0;
  for (double e : errors) sum += e;
  return sum / static_cast<double>(errors.size());
}

WeightGradient ioc_objective_gradient(const LinearSystem& sys,
                                      const CostWeights& w,
                                      const Dataset& data) {
  check_dataset(sys, data, "ioc_objective_gradient");
  const int n = sys.state_dim();
  const int m = sys.input_dim();
  const Eigen::MatrixXd& B = sys.B();
  const double scale = 2.0 / static_cast<double>(data.size());

  WeightGradient grad{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(m, m)};
  for (const auto& [N, members] : by_length(data)) {
    const GainSchedule s = riccati_solve(sys, w, N);
    std::vector<Eigen::MatrixXd> F(N - 1);
    for (int k = 0; k + 1 < N; ++k) F[k] = closed_loop(sys, s.gains[k]);

    // Adjoint of the closed-loop matrices: sum_i mu_i(k+1) x_i(k)'.
    std::vector<Eigen::MatrixXd> dF(N - 1, Eigen::MatrixXd::Zero(n, n));
    Eigen::MatrixXd x(n, N);
    for (std::size_t i : members) {
      const Eigen::MatrixXd& d = data.trajectories[i].states;
      x.col(0) = d.col(0);
      for (int k = 0; k + 1 < N; ++k) x.col(k + 1) = F[k] * x.col(k);
      Eigen::VectorXd mu = scale * (x.col(N - 1) - d.col(N - 1));
      for (int k = N - 2; k >= 0; --k) {
        dF[k] += mu * x.col(k).transpose();
        if (k > 0) mu = scale * (x.col(k) - d.col(k)) + F[k].transpose() * mu;
      }
    }

    // Reverse sweep through the Riccati recursion, k = 0 .. N-2. The
    // Joseph form P = Q + K'RK + F'P'F is stationary in K, so K only
    // contributes through its explicit dependence on (R, P').
    Eigen::MatrixXd dP = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k + 1 < N; ++k) {
      const Eigen::MatrixXd& K = s.gains[k];
      const Eigen::MatrixXd& Pn = s.value_matrices[k + 1];
      const Eigen::MatrixXd dK = -B.transpose() * dF[k];
      Eigen::LLT<Eigen::MatrixXd> G(w.R + B.transpose() * Pn * B);
      const Eigen::MatrixXd Ginv_dK = G.solve(dK);

      grad.dQ += dP;
      grad.dR += K * dP * K.transpose() - Ginv_dK * K.transpose();
      Eigen::MatrixXd dPn =
          F[k] * dP * F[k].transpose() + B * Ginv_dK * F[k].transpose();
      dP = 0.5 * (dPn + dPn.transpose());
    }
  }
  grad.dQ = 0.5 * (grad.dQ + grad.dQ.transpose()).eval();
  grad.dR = 0.5 * (grad.dR + grad.dR.transpose()).eval();
  return grad;
}

// ---------------------------------------------------------------------------
// Normalization

CostWeights normalize_weights(const CostWeights& w, Normalization mode) {
  const Eigen::Index m = w.R.rows();
  double alpha = 0.0;
  switch (mode) {
    case Normalization::kTraceR:
      alpha = w.R.trace() / static_cast<double>(m);
      break;
    case Normalization::kFixRScalar:
      if (m != 1) {
        throw ArgumentError("normalize_weights: fix_r_scalar needs m = 1, got " +
                            std::to_string(m));
      }
      alpha = w.R(0, 0);
      break;
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ArgumentError("normalize_weights: scale must be positive");
  }
  return {w.Q / alpha, w.R / alpha};
}

// ---------------------------------------------------------------------------
// Parameterization

namespace {

int factor_size(int dim, Structure s) {
  return s == Structure::kFull ? dim * (dim + 1) / 2 : dim;
}

}  // namespace

WeightParameterization::WeightParameterization(int n, int m,
                                               Structure q_structure,
                                               Structure r_structure)
    : n_(n),
      m_(m),
      q_structure_(q_structure),
      r_structure_(r_structure),
      q_size_(factor_size(n, q_structure)),
      r_size_(factor_size(m, r_structure)) {}

Eigen::MatrixXd WeightParameterization::factor(const Eigen::VectorXd& theta,
                                               int offset, int dim,
                                               Structure s) const {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(dim, dim);
  int idx = offset;
  for (int i = 0; i < dim; ++i) {
    if (s == Structure::kFull) {
      for (int j = 0; j <= i; ++j) L(i, j) = theta(idx++);
    } else {
      L(i, i) = theta(idx++);
    }
  }
  return L;
}

Eigen::VectorXd WeightParameterization::identity() const {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(size());
  int idx = 0;
  auto fill = [&](int dim, Structure s) {
    for (int i = 0; i < dim; ++i) {
      if (s == Structure::kFull) {
        idx += i;  // below-diagonal entries stay zero
      }
      theta(idx++) = 1.0;
    }
  };
  fill(n_, q_structure_);
  fill(m_, r_structure_);
  return theta;
}

CostWeights WeightParameterization::weights(const Eigen::VectorXd& theta) const {
  const Eigen::MatrixXd LQ = factor(theta, 0, n_, q_structure_);
  const Eigen::MatrixXd LR = factor(theta, q_size_, m_, r_structure_);
  CostWeights w{LQ * LQ.transpose(), LR * LR.transpose()};
  w.Q = 0.5 * (w.Q + w.Q.transpose()).eval();
  w.R = 0.5 * (w.R + w.R.transpose()).eval();
  w.R.diagonal().array() += kEpsilon;
  return w;
}

Eigen::VectorXd WeightParameterization::pullback(const Eigen::VectorXd& theta,
                                                 const WeightGradient& g) const {
  // d/dL of <G, L L'> is (G + G') L.
  const Eigen::MatrixXd LQ = factor(theta, 0, n_, q_structure_);
  const Eigen::MatrixXd LR = factor(theta, q_size_, m_, r_structure_);
  const Eigen::MatrixXd dLQ = (g.dQ + g.dQ.transpose()) * LQ;
  const Eigen::MatrixXd dLR = (g.dR + g.dR.transpose()) * LR;

  Eigen::VectorXd out(size());
  int idx = 0;
  auto gather = [&](const Eigen::MatrixXd& dL, int dim, Structure s) {
    for (int i = 0; i < dim; ++i) {
      if (s == Structure::kFull) {
        for (int j = 0; j <= i; ++j) out(idx++) = dL(i, j);
      } else {
        out(idx++) = dL(i, i);
      }
    }
  };
  gather(dLQ, n_, q_structure_);
  gather(dLR, m_, r_structure_);
  return out;
}

// ---------------------------------------------------------------------------
// Solver

IocResult solve_ioc(const LinearSystem& sys, const Dataset& data,
                    const IocConfig& cfg) {
  check_dataset(sys, data, "solve_ioc");
  cfg.validate(sys.input_dim());

  const WeightParameterization param(sys.state_dim(), sys.input_dim(),
                                     cfg.structure, cfg.r_structure);

  const SmoothObjective objective = [&](const Eigen::VectorXd& theta,
                                        Eigen::VectorXd* grad) -> double {
    try {
      const double f = ioc_objective(sys, param.weights(theta), data);
      if (cfg.gradient_mode == GradientMode::kAnalytic) {
        *grad = param.pullback(
            theta, ioc_objective_gradient(sys, param.weights(theta), data));
        return f;
      }
      grad->resize(theta.size());
      Eigen::VectorXd probe = theta;
      for (Eigen::Index i = 0; i < theta.size(); ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(theta(i)));
        probe(i) = theta(i) + h;
        const double fp = ioc_objective(sys, param.weights(probe), data);
        probe(i) = theta(i) - h;
        const double fm = ioc_objective(sys, param.weights(probe), data);
        probe(i) = theta(i);
        (*grad)(i) = (fp - fm) / (2.0 * h);
      }
      return f;
    } catch (const ConditioningError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  BfgsOptions opts;
  opts.max_iterations = cfg.max_iterations;
  opts.objective_tolerance = cfg.objective_tolerance;
  opts.gradient_tolerance = cfg.gradient_tolerance;

  CounterRng rng(cfg.seed, streams::kRestarts);
  std::optional<BfgsResult> best;
  int finished = 0;
  for (int r = 0; r < cfg.restarts; ++r) {
    Eigen::VectorXd start = param.identity();
    if (r > 0) {
      for (Eigen::Index i = 0; i < start.size(); ++i) {
        start(i) += 0.3 * rng.gaussian();
      }
    }
    BfgsResult res = minimize_bfgs(objective, std::move(start), opts);
    if (res.stop == BfgsStop::kNonFinite || !std::isfinite(res.value)) continue;
    ++finished;
    // Prefer converged runs; among equals, the lower objective.
    const bool better =
        !best || (res.converged() && !best->converged()) ||
        (res.converged() == best->converged() && res.value < best->value);
    if (better) best = std::move(res);
  }
  if (!best) {
    throw SolverError("solve_ioc: all " + std::to_string(cfg.restarts) +
                          " starts diverged",
                      std::numeric_limits<double>::quiet_NaN());
  }

  const CostWeights w = normalize_weights(param.weights(best->x),
                                          cfg.normalization);
  IocResult out;
  out.Q_hat = w.Q;
  out.R_hat = w.R;
  const std::vector<double> errors = ioc_squared_errors(sys, w, data);
  double sum = 0.0;
  out.per_trajectory_rmse.reserve(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    sum += errors[i];
    const double count = static_cast<double>(
        (data.trajectories[i].length() - 1) * sys.state_dim());
    out.per_trajectory_rmse.push_back(std::sqrt(errors[i] / count));
  }
  out.objective = sum / static_cast<double>(errors.size());
  out.iterations = best->iterations;
  out.restarts_used = finished;
  out.gradient_norm = best->gradient_norm;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> q_eig(out.Q_hat,
                                                       Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> r_eig(out.R_hat,
                                                       Eigen::EigenvaluesOnly);
  const bool feasible = q_eig.eigenvalues()(0) >= -1e-10 &&
                        r_eig.eigenvalues()(0) >= 1e-6;
  out.converged = best->converged() && feasible;
  return out;
}

}  // namespace invlqr
