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
#ifndef INVLQR_IOC_HPP
#define INVLQR_IOC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "invlqr/control.hpp"
#include "invlqr/dataset.hpp"

namespace invlqr {

enum class Structure { kFull, kDiagonal };
enum class Normalization { kTraceR, kFixRScalar };
enum class GradientMode { kFiniteDifference, kAnalytic };

std::string to_string(Structure s);
std::string to_string(Normalization n);
std::string to_string(GradientMode g);
/// Accept "full"/"diagonal", "trace_r"/"fix_r_scalar",
/// "finite_difference"/"analytic". Throw ConfigError otherwise.
Structure parse_structure(const std::string& s);
Normalization parse_normalization(const std::string& s);
GradientMode parse_gradient_mode(const std::string& s);

struct IocConfig {
  Structure structure = Structure::kFull;         // constraint on Q_hat
  Structure r_structure = Structure::kDiagonal;   // constraint on R_hat
  Normalization normalization = Normalization::kTraceR;
  int restarts = 4;
  int max_iterations = 500;
  double objective_tolerance = 1e-12;
  double gradient_tolerance = 1e-9;
  GradientMode gradient_mode = GradientMode::kFiniteDifference;
  std::uint64_t seed = 0;

  /// Throws ConfigError on bad counts/tolerances, or fix_r_scalar with
  /// input_dim != 1.
  void validate(int input_dim) const;

  friend bool operator==(const IocConfig&, const IocConfig&) = default;
};

/// Costates lambda(0..N-1) as columns; lambda(N-1) = 0.
struct AdjointSequence {
  Eigen::MatrixXd lambdas;
};

struct PmpSolution {
  Trajectory trajectory;
  AdjointSequence adjoint;
};

/// The unique (x, lambda, u) satisfying
///   lambda(k) = A' lambda(k+1) + Q x(k),   lambda(N-1) = 0,
///   u(k)      = -R^-1 B' lambda(k+1),
///   x(k+1)    = A x(k) - B R^-1 B' lambda(k+1),   x(0) = x_bar,
/// obtained from the Riccati sweep as lambda(k) = P(k) x(k). The trajectory
/// equals lqr_closed_loop(sys, w, x_bar, N).
PmpSolution reconstruct_pmp_trajectory(const LinearSystem& sys,
                                       const CostWeights& w,
                                       const Eigen::VectorXd& x_bar, int N);

/// Same solution from a sparse LU solve of the stacked two-point boundary
/// system (2 n (N-1) unknowns). Independent of the Riccati route; used for
/// cross-checks.
PmpSolution solve_pmp_boundary_value(const LinearSystem& sys,
                                     const CostWeights& w,
                                     const Eigen::VectorXd& x_bar, int N);

/// Per-trajectory sums sum_{k>=1} ||x_d(k) - x(k)||^2 where x is the PMP
/// reconstruction from x_d(0).
std::vector<double> ioc_squared_errors(const LinearSystem& sys,
                                       const CostWeights& w,
                                       const Dataset& data);

/// (1/M) sum_i sum_{k>=1} ||x_d_i(k) - x_i(k)||^2. Accumulated in
/// trajectory order. Throws ArgumentError on an empty dataset or
/// dimension mismatch.
double ioc_objective(const LinearSystem& sys, const CostWeights& w,
                     const Dataset& data);

/// d ioc_objective / dQ and d/dR by reverse-mode differentiation through
/// the forward rollout and the Riccati sweep. Entries are partials with
/// respect to each matrix entry treated independently; both matrices are
/// symmetric.
struct WeightGradient {
  Eigen::MatrixXd dQ;
  Eigen::MatrixXd dR;
};
WeightGradient ioc_objective_gradient(const LinearSystem& sys,
                                      const CostWeights& w,
                                      const Dataset& data);

/// (Q/a, R/a) with a = trace(R)/m (trace_r) or a = R (fix_r_scalar).
/// Throws ArgumentError for fix_r_scalar with m > 1.
CostWeights normalize_weights(const CostWeights& w, Normalization mode);

/// Unconstrained coordinates for the PSD/PD cone:
///   Q = L_Q L_Q',  R = L_R L_R' + eps I,  eps = 1e-6,
/// with L lower triangular (kFull) or diagonal (kDiagonal). The parameter
/// vector stacks the free entries of L_Q then L_R, row-major.
class WeightParameterization {
 public:
  static constexpr double kEpsilon = 1e-6;

  WeightParameterization(int n, int m, Structure q_structure,
                         Structure r_structure);

  int size() const noexcept { return q_size_ + r_size_; }
  /// Parameters of L_Q = I, L_R = I.
  Eigen::VectorXd identity() const;
  CostWeights weights(const Eigen::VectorXd& theta) const;
  /// Chain rule from a WeightGradient to d/dtheta.
  Eigen::VectorXd pullback(const Eigen::VectorXd& theta,
                           const WeightGradient& g) const;

 private:
  Eigen::MatrixXd factor(const Eigen::VectorXd& theta, int offset, int dim,
                         Structure s) const;

  int n_, m_;
  Structure q_structure_, r_structure_;
  int q_size_, r_size_;
};

struct IocResult {
  Eigen::MatrixXd Q_hat;
  Eigen::MatrixXd R_hat;
  double objective = 0.0;
  std::vector<double> per_trajectory_rmse;
  int iterations = 0;
  int restarts_used = 0;
  bool converged = false;
  double gradient_norm = 0.0;
};

/// Recover (Q_hat, R_hat) from closed-loop data by minimizing
/// ioc_objective over the structure-constrained cone with BFGS, starting
/// once from identity factors and cfg.restarts - 1 times from seeded
/// perturbations of them (std 0.3). The best start is normalized and
/// returned. Deterministic given cfg.seed.
///
/// Throws ArgumentError for an empty/inconsistent dataset, ConfigError for
/// a bad cfg, SolverError when every start diverges.
IocResult solve_ioc(const LinearSystem& sys, const Dataset& data,
                    const IocConfig& cfg);

}  // namespace invlqr

#endif  // INVLQR_IOC_HPP
