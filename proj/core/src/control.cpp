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
#include "invlqr/control.hpp"

#include <cmath>
#include <string>

#include "invlqr/errors.hpp"

namespace invlqr {
namespace {

bool is_symmetric(const Eigen::MatrixXd& M) {
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  return (M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

double min_eigenvalue(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

void CostWeights::validate() const {
  if (Q.rows() < 1 || Q.rows() != Q.cols() || R.rows() < 1 ||
      R.rows() != R.cols()) {
    throw ArgumentError("CostWeights: Q and R must be square and non-empty");
  }
  if (!Q.allFinite() || !R.allFinite()) {
    throw ArgumentError("CostWeights: non-finite entry");
  }
  if (!is_symmetric(Q) || !is_symmetric(R)) {
    throw ArgumentError("CostWeights: Q and R must be symmetric");
  }
  if (min_eigenvalue(Q) < -1e-10) {
    throw ArgumentError("CostWeights: Q must be positive semidefinite");
  }
  if (!(min_eigenvalue(R) > 0.0)) {
    throw ArgumentError("CostWeights: R must be positive definite");
  }
}

void CostWeights::validate(const LinearSystem& sys) const {
  validate();
  if (Q.rows() != sys.state_dim() || R.rows() != sys.input_dim()) {
    throw ArgumentError("CostWeights: Q is " + std::to_string(Q.rows()) +
                        "x" + std::to_string(Q.rows()) + " and R is " +
                        std::to_string(R.rows()) + "x" +
                        std::to_string(R.rows()) + " but the system has n=" +
                        std::to_string(sys.state_dim()) +
                        ", m=" + std::to_string(sys.input_dim()));
  }
}

GainSchedule riccati_solve(const LinearSystem& sys, const CostWeights& w,
                           int H) {
  const int n = sys.state_dim();
  return riccati_solve(sys, w, H, Eigen::MatrixXd::Zero(n, n));
}

GainSchedule riccati_solve(const LinearSystem& sys, const CostWeights& w,
                           int H, const Eigen::MatrixXd& terminal) {
  if (H < 2) throw ArgumentError("riccati_solve: horizon must be >= 2");
  w.validate(sys);
  const int n = sys.state_dim();
  if (terminal.rows() != n || terminal.cols() != n) {
    throw ArgumentError("riccati_solve: terminal weight must be n x n");
  }
  const Eigen::MatrixXd& A = sys.A();
  const Eigen::MatrixXd& B = sys.B();

  GainSchedule s;
  s.gains.resize(H - 1);
  s.value_matrices.resize(H);
  s.value_matrices[H - 1] = terminal;
  for (int k = H - 2; k >= 0; --k) {
    const Eigen::MatrixXd& P = s.value_matrices[k + 1];
    const Eigen::MatrixXd PB = P * B;
    const Eigen::MatrixXd G = w.R + B.transpose() * PB;
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-14)) {
      throw ConditioningError("riccati_solve: R + B'PB is singular at step " +
                              std::to_string(k));
    }
    Eigen::MatrixXd K = llt.solve(PB.transpose() * A);
    Eigen::MatrixXd Pk = w.Q + A.transpose() * P * A - A.transpose() * PB * K;
    s.value_matrices[k] = 0.5 * (Pk + Pk.transpose());
    s.gains[k] = std::move(K);
  }
  return s;
}

Trajectory lqr_closed_loop(const LinearSystem& sys, const CostWeights& w,
                           const Eigen::VectorXd& x0, int N) {
  if (x0.size() != sys.state_dim()) {
    throw ArgumentError("lqr_closed_loop: x0 dimension mismatch");
  }
  const GainSchedule s = riccati_solve(sys, w, N);
  Trajectory t{Eigen::MatrixXd(sys.state_dim(), N),
               Eigen::MatrixXd(sys.input_dim(), N - 1)};
  t.states.col(0) = x0;
  for (int k = 0; k + 1 < N; ++k) {
    t.inputs.col(k) = -s.gains[k] * t.states.col(k);
    t.states.col(k + 1) = sys.A() * t.states.col(k) + sys.B() * t.inputs.col(k);
  }
  return t;
}

Eigen::MatrixXd mpc_gain_lti(const LinearSystem& sys, const CostWeights& w,
                             int T) {
  if (T < 1) throw ArgumentError("mpc_gain_lti: horizon must be >= 1");
  return riccati_solve(sys, w, T + 1, w.Q).gains.front();
}

Policy mpc_policy_lti(const LinearSystem& sys, const CostWeights& w, int T) {
  Eigen::MatrixXd K = mpc_gain_lti(sys, w, T);
  return [K = std::move(K)](int, const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return -K * y;
  };
}

double equilibrium_input(const PendulumParams& p, double theta_r) {
  return -p.mass * p.gravity * p.length * std::sin(theta_r);
}

}  // namespace invlqr
