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
// Reference computations used only by the tests. Each one is a different
// formulation from the library code it is compared against.
#ifndef INVLQR_TESTS_ORACLES_HPP
#define INVLQR_TESTS_ORACLES_HPP

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "invlqr/control.hpp"
#include "invlqr/dataset.hpp"

namespace invlqr::testing {

/// Dense solve of the stacked LQ two-point boundary problem: unknowns
/// x(1..N-1), lambda(0..N-2) with u eliminated, via a full-pivot LU.
/// Returns states (n x N) and adjoints (n x N), lambda(N-1) = 0.
struct DenseTpbvp {
  Eigen::MatrixXd states;
  Eigen::MatrixXd lambdas;
  Eigen::MatrixXd inputs;
};

inline DenseTpbvp dense_tpbvp(const LinearSystem& sys, const CostWeights& w,
                              const Eigen::VectorXd& x0, int N) {
  const auto& A = sys.A();
  const auto& B = sys.B();
  const int n = sys.state_dim();
  const Eigen::MatrixXd S = B * w.R.inverse() * B.transpose();
  // Layout: block k in [0, N-1) holds x(k+1) then lambda(k+1) for
  // k+1 < N-1; lambda(0) is recovered afterwards.
  const int K = N - 1;
  const int dim = 2 * n * K;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  auto xi = [n](int k) { return 2 * n * (k - 1); };      // x(k), k >= 1
  auto li = [n](int k) { return 2 * n * (k - 1) + n; };  // lambda(k), k >= 1
  int row = 0;
  // x(k+1) - A x(k) + S lambda(k+1) = 0, k = 0..N-2
  for (int k = 0; k < K; ++k, row += n) {
    M.block(row, xi(k + 1), n, n) += Eigen::MatrixXd::Identity(n, n);
    if (k >= 1) {
      M.block(row, xi(k), n, n) -= A;
    } else {
      rhs.segment(row, n) += A * x0;
    }
    if (k + 1 < N - 1) M.block(row, li(k + 1), n, n) += S;
  }
  // lambda(k) - A' lambda(k+1) - Q x(k) = 0, k = 1..N-2; lambda(N-1) = 0
  for (int k = 1; k < K; ++k, row += n) {
    M.block(row, li(k), n, n) += Eigen::MatrixXd::Identity(n, n);
    if (k + 1 < N - 1) M.block(row, li(k + 1), n, n) -= A.transpose();
    M.block(row, xi(k), n, n) -= w.Q;
  }
  // lambda(N-1) = 0 pins the unused last slot.
  M.block(row, li(N - 1), n, n) += Eigen::MatrixXd::Identity(n, n);
  row += n;

  const Eigen::VectorXd z = M.fullPivLu().solve(rhs);
  DenseTpbvp out;
  out.states.resize(n, N);
  out.lambdas.resize(n, N);
  out.inputs.resize(sys.input_dim(), N - 1);
  out.states.col(0) = x0;
  for (int k = 1; k < N; ++k) {
    out.states.col(k) = z.segment(xi(k), n);
    out.lambdas.col(k) = z.segment(li(k), n);
  }
  out.lambdas.col(N - 1).setZero();
  out.lambdas.col(0) = A.transpose() * out.lambdas.col(1) + w.Q * x0;
  for (int k = 0; k + 1 < N; ++k) {
    out.inputs.col(k) =
        -w.R.inverse() * B.transpose() * out.lambdas.col(k + 1);
  }
  return out;
}

/// Infinite-horizon gain by fixed-point iteration of the DARE.
inline Eigen::MatrixXd dare_gain(const LinearSystem& sys, const CostWeights& w,
                                 int iterations = 20000) {
  const auto& A = sys.A();
  const auto& B = sys.B();
  Eigen::MatrixXd P = w.Q;
  for (int i = 0; i < iterations; ++i) {
    const Eigen::MatrixXd G = w.R + B.transpose() * P * B;
    const Eigen::MatrixXd next =
        w.Q + A.transpose() * P * A -
        A.transpose() * P * B * G.ldlt().solve(B.transpose() * P * A);
    const double change = (next - P).cwiseAbs().maxCoeff();
    P = 0.5 * (next + next.transpose());
    if (change < 1e-15) break;
  }
  return (w.R + B.transpose() * P * B).ldlt().solve(B.transpose() * P * A);
}

/// Central finite difference of a scalar function of a vector.
inline Eigen::VectorXd central_difference(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

/// Small deterministic generator for property tests (xorshift64*).
class PropertyRng {
 public:
  explicit PropertyRng(std::uint64_t seed) : s_(seed * 2654435761u + 1) {}
  double uniform(double lo, double hi) {
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    const std::uint64_t r = s_ * 0x2545F4914F6CDD1DULL;
    return lo + (hi - lo) * static_cast<double>(r >> 11) * 0x1.0p-53;
  }
  int integer(int lo, int hi) {
    return lo + static_cast<int>(uniform(0.0, 1.0) * (hi - lo + 1));
  }
  Eigen::MatrixXd matrix(int rows, int cols, double lo = -1.0,
                         double hi = 1.0) {
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index i = 0; i < M.size(); ++i) M(i) = uniform(lo, hi);
    return M;
  }

 private:
  std::uint64_t s_;
};

inline LinearSystem second_order() {
  Eigen::MatrixXd A(2, 2);
  A << 1.0, 1.0, -0.5, 1.0;
  return LinearSystem(A, 0.5 * Eigen::MatrixXd::Identity(2, 2));
}

inline CostWeights mpc_weights() {
  return {Eigen::Vector2d(0.3, 0.1).asDiagonal(),
          Eigen::MatrixXd::Identity(2, 2)};
}

}  // namespace invlqr::testing

#endif  // INVLQR_TESTS_ORACLES_HPP
