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
#include "invlqr_cli/workloads.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "invlqr/data_io.hpp"
#include "invlqr/systems.hpp"

namespace invlqr::cli {
namespace {

int uniform_int(CounterRng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.next_u64() %
                               static_cast<std::uint64_t>(hi - lo + 1));
}

Eigen::MatrixXd gaussian_matrix(CounterRng& rng, int rows, int cols) {
  Eigen::MatrixXd M(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) M(i, j) = rng.gaussian();
  }
  return M;
}

}  // namespace

LqInstance random_lq_instance(CounterRng& rng, int max_n, int max_m,
                              int max_N) {
  const int n = uniform_int(rng, 1, max_n);
  const int m = uniform_int(rng, 1, max_m);
  const int N = uniform_int(rng, 2, max_N);

  Eigen::MatrixXd A = gaussian_matrix(rng, n, n);
  const double radius = A.eigenvalues().cwiseAbs().maxCoeff();
  A *= rng.uniform(0.5, 1.2) / std::max(radius, 1e-12);
  const Eigen::MatrixXd B = gaussian_matrix(rng, n, m);

  const Eigen::MatrixXd Lq = gaussian_matrix(rng, n, n);
  const Eigen::MatrixXd Lr = gaussian_matrix(rng, m, m);
  Eigen::MatrixXd Q = Lq * Lq.transpose();
  Eigen::MatrixXd R = Lr * Lr.transpose() +
                      0.1 * Eigen::MatrixXd::Identity(m, m);
  Q = 0.5 * (Q + Q.transpose());
  R = 0.5 * (R + R.transpose());

  Eigen::VectorXd x0(n);
  for (int i = 0; i < n; ++i) x0(i) = rng.uniform(-2.0, 2.0);
  return {LinearSystem(A, B), {Q, R}, x0, N};
}

LinearSystem second_order_system() {
  Eigen::MatrixXd A(2, 2);
  A << 1.0, 1.0, -0.5, 1.0;
  return LinearSystem(A, 0.5 * Eigen::MatrixXd::Identity(2, 2));
}

Dataset lqr_dataset(const LinearSystem& sys, const CostWeights& w, int M,
                    int N, double noise_std, std::uint64_t seed) {
  const int n = sys.state_dim();
  const std::vector<Interval> bounds(static_cast<std::size_t>(n),
                                     Interval{-2.0, 2.0});
  const auto x0s = sample_initial_conditions(bounds, M, seed);
  const GainSchedule schedule = riccati_solve(sys, w, N);
  const LtiPlant plant(sys);
  const Policy policy = [&schedule](int k, const Eigen::VectorXd& y) {
    return Eigen::VectorXd(-schedule.gains[static_cast<std::size_t>(k)] * y);
  };

  Dataset data;
  data.meta.plant = sys;
  data.meta.controller_id = "lqr";
  data.meta.seed = seed;
  data.meta.noise_std = noise_std;
  for (int i = 0; i < M; ++i) {
    data.trajectories.push_back(simulate_closed_loop(
        plant, policy, x0s[static_cast<std::size_t>(i)], N, noise_std,
        seed + static_cast<std::uint64_t>(i)));
  }
  return data;
}

RecoveryError recovery_error(const CostWeights& truth,
                             const Eigen::MatrixXd& Q_hat,
                             const Eigen::MatrixXd& R_hat) {
  return {(Q_hat - truth.Q).norm() / truth.Q.norm(),
          (R_hat - truth.R).norm() / truth.R.norm()};
}

}  // namespace invlqr::cli
