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
#include <string>

#include "invlqr/control.hpp"
#include "invlqr/errors.hpp"

namespace invlqr {
namespace {

struct Rollout {
  std::vector<Eigen::VectorXd> x;  // x(0..T)
  double cost = 0.0;
};

double tracking_cost(const CostWeights& w, const ReferenceSignal& ref,
                     const std::vector<Eigen::VectorXd>& u,
                     const std::vector<Eigen::VectorXd>& x) {
  double c = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const Eigen::VectorXd du = u[k] - ref.u_ref;
    const Eigen::VectorXd dx = x[k + 1] - ref.x_ref;
    c += du.dot(w.R * du) + dx.dot(w.Q * dx);
  }
  return c;
}

Rollout rollout(const Plant& plant, const CostWeights& w,
                const ReferenceSignal& ref, const Eigen::VectorXd& x0,
                const std::vector<Eigen::VectorXd>& u) {
  Rollout r;
  r.x.reserve(u.size() + 1);
  r.x.push_back(x0);
  for (const Eigen::VectorXd& uk : u) r.x.push_back(plant.step(r.x.back(), uk));
  r.cost = tracking_cost(w, ref, u, r.x);
  return r;
}

}  // namespace

NmpcController::NmpcController(const Plant& plant, CostWeights w, int T,
                               NmpcOptions opts)
    : plant_(plant), w_(std::move(w)), T_(T), opts_(opts) {
  if (T_ < 1) throw ArgumentError("NmpcController: horizon must be >= 1");
  w_.validate();
  if (w_.Q.rows() != plant_.state_dim() || w_.R.rows() != plant_.input_dim()) {
    throw ArgumentError("NmpcController: weights do not match the plant");
  }
}

Eigen::VectorXd NmpcController::step(const Eigen::VectorXd& x0,
                                     const ReferenceSignal& ref) {
  const int n = plant_.state_dim();
  const int m = plant_.input_dim();
  if (x0.size() != n || ref.x_ref.size() != n || ref.u_ref.size() != m) {
    throw ArgumentError("NmpcController::step: dimension mismatch");
  }

  std::vector<Eigen::VectorXd> u(T_, ref.u_ref);
  if (static_cast<int>(warm_.size()) == T_) {
    for (int k = 0; k + 1 < T_; ++k) u[k] = warm_[k + 1];
    u[T_ - 1] = warm_[T_ - 1];
  }

  const Eigen::MatrixXd& Q = w_.Q;
  const Eigen::MatrixXd& R = w_.R;
  Rollout cur = rollout(plant_, w_, ref, x0, u);
  std::vector<StepJacobians> jac(T_);
  std::vector<Eigen::VectorXd> ff(T_);
  std::vector<Eigen::MatrixXd> fb(T_);

  stats_ = {};
  double grad_norm = 0.0;
  double grad_scale = 1.0;
  for (int iter = 0;; ++iter) {
    for (int k = 0; k < T_; ++k) jac[k] = plant_.linearize(cur.x[k], u[k]);

    // Open-loop gradient by the adjoint recursion; stationarity test.
    Eigen::VectorXd lambda = 2.0 * Q * (cur.x[T_] - ref.x_ref);
    double g2 = 0.0;
    for (int k = T_ - 1; k >= 0; --k) {
      const Eigen::VectorXd g =
          2.0 * R * (u[k] - ref.u_ref) + jac[k].B.transpose() * lambda;
      g2 += g.squaredNorm();
      if (k > 0) {
        lambda = 2.0 * Q * (cur.x[k] - ref.x_ref) + jac[k].A.transpose() * lambda;
      }
    }
    grad_norm = std::sqrt(g2);
    stats_ = {iter, cur.cost, grad_norm};
    if (iter == 0) grad_scale = std::max(1.0, grad_norm);
    if (grad_norm <= opts_.stationarity_tolerance * grad_scale) break;
    if (iter >= opts_.max_iterations) {
      throw SolverError("nmpc_step: no convergence in " +
                            std::to_string(opts_.max_iterations) +
                            " iterations",
                        grad_norm);
    }

    // Time-varying LQ subproblem in (dx, du) around the rollout.
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    double expected = 0.0;  // sum g'H^-1 g
    for (int k = T_ - 1; k >= 0; --k) {
      const Eigen::MatrixXd& A = jac[k].A;
      const Eigen::MatrixXd& B = jac[k].B;
      const Eigen::MatrixXd Sn = Q + S;
      const Eigen::VectorXd sn = Q * (cur.x[k + 1] - ref.x_ref) + s;
      const Eigen::MatrixXd H = R + B.transpose() * Sn * B;
      const Eigen::VectorXd g = R * (u[k] - ref.u_ref) + B.transpose() * sn;
      const Eigen::MatrixXd G = B.transpose() * Sn * A;
      Eigen::LLT<Eigen::MatrixXd> llt(H);
      if (llt.info() != Eigen::Success) {
        throw SolverError("nmpc_step: indefinite LQ subproblem", grad_norm);
      }
      ff[k] = -llt.solve(g);
      fb[k] = -llt.solve(G);
      expected += -g.dot(ff[k]);
      S = A.transpose() * Sn * A + G.transpose() * fb[k];
      S = 0.5 * (S + S.transpose());
      s = A.transpose() * sn + G.transpose() * ff[k];
    }

    // Decrease below rounding: the iterate is as stationary as double
    // precision allows.
    if (expected <= 1e-13 * (1.0 + cur.cost)) break;

    // Backtracking along the closed-loop rollout.
    bool accepted = false;
    double alpha = 1.0;
    std::vector<Eigen::VectorXd> trial_u(T_);
    for (int bt = 0; bt <= opts_.max_backtracks; ++bt) {
      Rollout trial;
      trial.x.reserve(T_ + 1);
      trial.x.push_back(x0);
      for (int k = 0; k < T_; ++k) {
        trial_u[k] = u[k] + alpha * ff[k] + fb[k] * (trial.x[k] - cur.x[k]);
        trial.x.push_back(plant_.step(trial.x[k], trial_u[k]));
      }
      trial.cost = tracking_cost(w_, ref, trial_u, trial.x);
      if (std::isfinite(trial.cost) &&
          trial.cost <= cur.cost - opts_.armijo_slope * alpha * 2.0 * expected) {
        u = trial_u;
        cur = std::move(trial);
        accepted = true;
        break;
      }
      alpha *= opts_.backtrack_factor;
    }
    if (!accepted) {
      throw SolverError("nmpc_step: line search failed", grad_norm);
    }
  }

  warm_ = u;
  return u.front();
}

Eigen::VectorXd nmpc_step(const Plant& plant, const CostWeights& w,
                          const Eigen::VectorXd& x, const ReferenceSignal& ref,
                          int T, const NmpcOptions& opts) {
  NmpcController ctrl(plant, w, T, opts);
  return ctrl.step(x, ref);
}

}  // namespace invlqr
