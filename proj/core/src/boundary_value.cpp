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
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "invlqr/errors.hpp"
#include "invlqr/ioc.hpp"

namespace invlqr {

// Unknowns z = [x(1..N-1), lambda(1..N-1)], equations in the same order:
//   x(k+1) - A x(k) + B R^-1 B' lambda(k+1) = 0     k = 0..N-2
//   lambda(k) - A' lambda(k+1) - Q x(k)     = 0     k = 1..N-2
//   lambda(N-1)                             = 0
PmpSolution solve_pmp_boundary_value(const LinearSystem& sys,
                                     const CostWeights& w,
                                     const Eigen::VectorXd& x_bar, int N) {
  if (N < 2) throw ArgumentError("solve_pmp_boundary_value: N must be >= 2");
  w.validate(sys);
  const int n = sys.state_dim();
  const int m = sys.input_dim();
  if (x_bar.size() != n) {
    throw ArgumentError("solve_pmp_boundary_value: x_bar dimension mismatch");
  }
  const Eigen::MatrixXd& A = sys.A();
  const Eigen::MatrixXd& B = sys.B();
  const Eigen::MatrixXd Rinv_Bt = w.R.llt().solve(B.transpose());
  const Eigen::MatrixXd M = B * Rinv_Bt;

  const int steps = N - 1;
  const int unknowns = 2 * n * steps;
  auto xi = [&](int k) { return (k - 1) * n; };
  auto li = [&](int k) { return n * steps + (k - 1) * n; };

  std::vector<Eigen::Triplet<double>> entries;
  auto add_block = [&](int row, int col, const Eigen::MatrixXd& blk) {
    for (int i = 0; i < blk.rows(); ++i) {
      for (int j = 0; j < blk.cols(); ++j) {
        if (blk(i, j) != 0.0) entries.emplace_back(row + i, col + j, blk(i, j));
      }
    }
  };
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);

  int row = 0;
  for (int k = 0; k + 1 < N; ++k, row += n) {
    add_block(row, xi(k + 1), I);
    if (k == 0) {
      rhs.segment(row, n) = A * x_bar;
    } else {
      add_block(row, xi(k), -A);
    }
    add_block(row, li(k + 1), M);
  }
  for (int k = 1; k + 1 < N; ++k, row += n) {
    add_block(row, li(k), I);
    add_block(row, li(k + 1), -A.transpose());
    add_block(row, xi(k), -w.Q);
  }
  add_block(row, li(N - 1), I);

  Eigen::SparseMatrix<double> system(unknowns, unknowns);
  system.setFromTriplets(entries.begin(), entries.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(system);
  if (lu.info() != Eigen::Success) {
    throw ConditioningError("solve_pmp_boundary_value: singular system");
  }
  const Eigen::VectorXd z = lu.solve(rhs);

  PmpSolution sol;
  sol.trajectory.states.resize(n, N);
  sol.trajectory.inputs.resize(m, steps);
  sol.adjoint.lambdas.resize(n, N);
  sol.trajectory.states.col(0) = x_bar;
  for (int k = 1; k < N; ++k) {
    sol.trajectory.states.col(k) = z.segment(xi(k), n);
    sol.adjoint.lambdas.col(k) = z.segment(li(k), n);
  }
  sol.adjoint.lambdas.col(0) =
      A.transpose() * sol.adjoint.lambdas.col(1) + w.Q * x_bar;
  for (int k = 0; k < steps; ++k) {
    sol.trajectory.inputs.col(k) = -Rinv_Bt * sol.adjoint.lambdas.col(k + 1);
  }
  return sol;
}

}  // namespace invlqr
