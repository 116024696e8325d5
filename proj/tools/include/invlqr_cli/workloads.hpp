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
#ifndef INVLQR_CLI_WORKLOADS_HPP
#define INVLQR_CLI_WORKLOADS_HPP

#include <cstdint>

#include "invlqr/control.hpp"
#include "invlqr/dataset.hpp"
#include "invlqr/rng.hpp"

namespace invlqr::cli {

/// A random finite-horizon LQ instance.
struct LqInstance {
  LinearSystem system;
  CostWeights weights;
  Eigen::VectorXd x0;
  int N = 0;
};

/// n in [1, max_n], m in [1, max_m], N in [2, max_N]; A rescaled to a
/// spectral radius in [0.5, 1.2]; Q PSD, R PD with condition number below
/// about 1e3.
LqInstance random_lq_instance(CounterRng& rng, int max_n = 4, int max_m = 2,
                              int max_N = 40);

/// The system used for the regulation case studies:
/// A = [[1, 1], [-0.5, 1]], B = 0.5 I.
LinearSystem second_order_system();

/// M closed-loop runs of the finite-horizon LQR u(k) = -K(k) y(k), x0 drawn
/// from [-2, 2]^n. With noise_std > 0 the recorded and fed-back states are
/// noisy measurements, as in the dataset generator.
Dataset lqr_dataset(const LinearSystem& sys, const CostWeights& w, int M,
                    int N, double noise_std, std::uint64_t seed);

/// Relative Frobenius errors of an estimate against the truth.
struct RecoveryError {
  double q = 0.0;
  double r = 0.0;
  double max() const { return q > r ? q : r; }
};
RecoveryError recovery_error(const CostWeights& truth,
                             const Eigen::MatrixXd& Q_hat,
                             const Eigen::MatrixXd& R_hat);

}  // namespace invlqr::cli

#endif  // INVLQR_CLI_WORKLOADS_HPP
