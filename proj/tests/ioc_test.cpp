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
#include <vector>

#include <gtest/gtest.h>

#include "invlqr/bfgs.hpp"
#include "invlqr/errors.hpp"
#include "invlqr/ioc.hpp"
#include "invlqr/rng.hpp"
#include "oracles.hpp"

namespace invlqr {
namespace {

using testing::mpc_weights;
using testing::PropertyRng;
using testing::second_order;

double max_abs(const Eigen::MatrixXd& M) {
  return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

struct Instance {
  LinearSystem sys;
  CostWeights w;
  Eigen::VectorXd x0;
  int N;
};

Instance random_instance(PropertyRng& rng) {
  const int n = rng.integer(1, 4);
  const int m = rng.integer(1, 2);
  Eigen::MatrixXd A = rng.matrix(n, n);
  A *= rng.uniform(0.5, 1.2) /
       std::max(1e-9, A.eigenvalues().cwiseAbs().maxCoeff());
  const Eigen::MatrixXd L = rng.matrix(n, n);
  const Eigen::MatrixXd Lr = rng.matrix(m, m);
  return {LinearSystem(A, rng.matrix(n, m)),
          {L * L.transpose(),
           Lr * Lr.transpose() + 0.1 * Eigen::MatrixXd::Identity(m, m)},
          rng.matrix(n, 1, -2, 2),
          rng.integer(2, 40)};
}

Dataset lqr_data(const LinearSystem& sys, const CostWeights& w, int M, int N,
                 std::uint64_t seed) {
  CounterRng rng(seed, 1);
  Dataset data;
  data.meta.plant = sys;
  for (int i = 0; i < M; ++i) {
    Eigen::VectorXd x0(sys.state_dim());
    for (Eigen::Index j = 0; j < x0.size(); ++j) x0(j) = rng.uniform(-2, 2);
    data.trajectories.push_back(lqr_closed_loop(sys, w, x0, N));
  }
  return data;
}

TEST(Pmp, RiccatiRouteMatchesBothBoundaryValueSolves) {
  PropertyRng rng(1);
  for (int t = 0; t < 50; ++t) {
    const Instance in = random_instance(rng);
    const PmpSolution a = reconstruct_pmp_trajectory(in.sys, in.w, in.x0, in.N);
    const PmpSolution b = solve_pmp_boundary_value(in.sys, in.w, in.x0, in.N);
    const auto c = testing::dense_tpbvp(in.sys, in.w, in.x0, in.N);
    const double scale = 1.0 + max_abs(c.states) + max_abs(c.lambdas);
    EXPECT_LT(max_abs(a.trajectory.states - b.trajectory.states), 1e-8);
    EXPECT_LT(max_abs(a.adjoint.lambdas - b.adjoint.lambdas), 1e-8);
    EXPECT_LT(max_abs(a.trajectory.states - c.states), 1e-8 * scale);
    EXPECT_LT(max_abs(a.adjoint.lambdas - c.lambdas), 1e-8 * scale);
    EXPECT_LT(max_abs(a.trajectory.inputs - c.inputs), 1e-8 * scale);
  }
}

TEST(Pmp, SecondOrderSystemAgreement) {
  const Eigen::Vector2d x0(2, -1);
  const PmpSolution a =
      reconstruct_pmp_trajectory(second_order(), mpc_weights(), x0, 30);
  const PmpSolution b =
      solve_pmp_boundary_value(second_order(), mpc_weights(), x0, 30);
  EXPECT_LT(max_abs(a.trajectory.states - b.trajectory.states), 1e-8);
  EXPECT_EQ(a.trajectory,
            lqr_closed_loop(second_order(), mpc_weights(), x0, 30));
}

TEST(Pmp, TerminalConditions) {
  PropertyRng rng(2);
  for (int t = 0; t < 20; ++t) {
    const Instance in = random_instance(rng);
    const PmpSolution a = reconstruct_pmp_trajectory(in.sys, in.w, in.x0, in.N);
    EXPECT_TRUE(a.adjoint.lambdas.col(in.N - 1).isZero(0.0));
    EXPECT_LT(max_abs(a.trajectory.inputs.col(in.N - 2)), 1e-15);
  }
}

TEST(Pmp, ZeroStateCostHasZeroAdjoint) {
  const CostWeights w{Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Identity()};
  const PmpSolution a =
      reconstruct_pmp_trajectory(second_order(), w, Eigen::Vector2d(1, 1), 12);
  EXPECT_TRUE(a.adjoint.lambdas.isZero(0.0));
  EXPECT_TRUE(a.trajectory.inputs.isZero(0.0));
}

Dataset handmade_dataset() {
  Dataset data;
  data.meta.plant = second_order();
  Trajectory a;
  a.states.resize(2, 5);
  a.states << 1.0, 0.9, 0.7, 0.4, 0.2, -0.5, 0.1, 0.3, 0.2, 0.05;
  a.inputs = Eigen::MatrixXd::Zero(2, 4);
  Trajectory b;
  b.states.resize(2, 4);
  b.states << -1.5, -1.1, -0.6, -0.3, 0.5, 0.4, 0.2, 0.1;
  b.inputs = Eigen::MatrixXd::Zero(2, 3);
  data.trajectories = {a, b};
  return data;
}

TEST(IocObjective, MatchesBatchLeastSquaresOracle) {
  // Batch QP reconstruction of each trajectory in numpy.
  const CostWeights w{Eigen::Matrix2d{{0.5, 0.1}, {0.1, 0.2}},
                      Eigen::Vector2d(1.0, 2.0).asDiagonal()};
  EXPECT_NEAR(ioc_objective(second_order(), w, handmade_dataset()),
              9.52364228040841, 1e-12);
}

TEST(IocObjective, ZeroAtGeneratingWeights) {
  const Dataset data = lqr_data(second_order(), mpc_weights(), 10, 30, 1);
  EXPECT_LT(ioc_objective(second_order(), mpc_weights(), data), 1e-16);
  CostWeights off = mpc_weights();
  off.Q(0, 0) += 0.1;
  EXPECT_GT(ioc_objective(second_order(), off, data), 0.0);
}

TEST(IocObjective, ScaleInvariant) {
  const Dataset data = handmade_dataset();
  PropertyRng rng(5);
  for (int t = 0; t < 10; ++t) {
    const Eigen::MatrixXd L = rng.matrix(2, 2);
    const CostWeights w{L * L.transpose(),
                        Eigen::Vector2d(rng.uniform(0.2, 2), rng.uniform(0.2, 2))
                            .asDiagonal()};
    const double base = ioc_objective(second_order(), w, data);
    for (double a : {1e-2, 0.1, 10.0, 1e2}) {
      const double scaled =
          ioc_objective(second_order(), {a * w.Q, a * w.R}, data);
      EXPECT_LT(std::abs(scaled - base), 1e-10 * std::abs(base));
    }
  }
}

TEST(IocObjective, RejectsBadInput) {
  EXPECT_THROW(ioc_objective(second_order(), mpc_weights(), Dataset{}),
               ArgumentError);
  Dataset data = handmade_dataset();
  data.trajectories[1].states = Eigen::MatrixXd::Zero(3, 4);
  EXPECT_THROW(ioc_objective(second_order(), mpc_weights(), data),
               ArgumentError);
}

TEST(IocGradient, MatchesCentralDifferences) {
  PropertyRng rng(6);
  for (int t = 0; t < 10; ++t) {
    const Instance in = random_instance(rng);
    const int n = in.sys.state_dim();
    const int m = in.sys.input_dim();
    Dataset data = lqr_data(in.sys, in.w, 3, std::max(in.N, 3), t);
    for (Trajectory& tr : data.trajectories) {
      tr.states += 0.05 * rng.matrix(n, static_cast<int>(tr.states.cols()));
    }
    const WeightGradient g = ioc_objective_gradient(in.sys, in.w, data);
    // Symmetric perturbations: entry (i, j) and (j, i) move together, so
    // the matching analytic derivative is G(i, j) + G(j, i) off the diagonal.
    auto pack = [](const Eigen::MatrixXd& M, const Eigen::MatrixXd& G,
                   std::vector<double>& v, std::vector<double>& d) {
      for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
          v.push_back(M(i, j));
          d.push_back(i == j ? G(i, j) : G(i, j) + G(j, i));
        }
      }
    };
    auto unpack = [](const double* z, int k) {
      Eigen::MatrixXd M(k, k);
      for (int i = 0, at = 0; i < k; ++i) {
        for (int j = 0; j <= i; ++j, ++at) M(i, j) = M(j, i) = z[at];
      }
      return M;
    };
    std::vector<double> vals, derivs;
    pack(in.w.Q, g.dQ, vals, derivs);
    pack(in.w.R, g.dR, vals, derivs);
    const Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(
        vals.data(), static_cast<Eigen::Index>(vals.size()));
    const Eigen::VectorXd analytic = Eigen::Map<Eigen::VectorXd>(
        derivs.data(), static_cast<Eigen::Index>(derivs.size()));
    const int nq = n * (n + 1) / 2;
    auto f = [&](const Eigen::VectorXd& z) {
      return ioc_objective(in.sys,
                           {unpack(z.data(), n), unpack(z.data() + nq, m)},
                           data);
    };
    const Eigen::VectorXd fd = testing::central_difference(f, v, 1e-6);
    const double scale = 1.0 + analytic.cwiseAbs().maxCoeff();
    EXPECT_LT((fd - analytic).cwiseAbs().maxCoeff(), 1e-5 * scale);
  }
}

TEST(NormalizeWeights, Examples) {
  const CostWeights a = normalize_weights(
      {Eigen::Vector2d(10, 5).asDiagonal(), Eigen::MatrixXd::Constant(1, 1, 5)},
      Normalization::kFixRScalar);
  EXPECT_EQ(a.R(0, 0), 1.0);
  EXPECT_TRUE(a.Q.isApprox(Eigen::Matrix2d(Eigen::Vector2d(2, 1).asDiagonal())));
  const CostWeights b = normalize_weights(
      {Eigen::Matrix2d::Identity(), 2.0 * Eigen::Matrix2d::Identity()},
      Normalization::kTraceR);
  EXPECT_EQ(b.R, Eigen::MatrixXd(Eigen::Matrix2d::Identity()));
  EXPECT_THROW(normalize_weights(mpc_weights(), Normalization::kFixRScalar),
               ArgumentError);
}

TEST(NormalizeWeights, QuotientsScaleAndIsIdempotent) {
  PropertyRng rng(7);
  for (int t = 0; t < 50; ++t) {
    const Instance in = random_instance(rng);
    const CostWeights one = normalize_weights(in.w, Normalization::kTraceR);
    const CostWeights two = normalize_weights(
        {2.0 * in.w.Q, 2.0 * in.w.R}, Normalization::kTraceR);
    const CostWeights again = normalize_weights(one, Normalization::kTraceR);
    EXPECT_LT(max_abs(one.Q - two.Q), 1e-14 * (1.0 + max_abs(one.Q)));
    EXPECT_LT(max_abs(again.Q - one.Q), 1e-14 * (1.0 + max_abs(one.Q)));
    EXPECT_NEAR(one.R.trace(), in.sys.input_dim(), 1e-12);
  }
}

TEST(WeightParameterization, IdentityAndPullback) {
  for (Structure qs : {Structure::kFull, Structure::kDiagonal}) {
    for (Structure rs : {Structure::kFull, Structure::kDiagonal}) {
      const WeightParameterization par(3, 2, qs, rs);
      const CostWeights w = par.weights(par.identity());
      EXPECT_EQ(w.Q, Eigen::MatrixXd(Eigen::Matrix3d::Identity()));
      EXPECT_TRUE(w.R.isApprox(
          (1.0 + WeightParameterization::kEpsilon) * Eigen::Matrix2d::Identity()));
      EXPECT_EQ(par.size(), (qs == Structure::kFull ? 6 : 3) +
                                (rs == Structure::kFull ? 3 : 2));

      PropertyRng rng(9);
      const Eigen::VectorXd theta = rng.matrix(par.size(), 1);
      const Eigen::MatrixXd GQ = rng.matrix(3, 3);
      const Eigen::MatrixXd GR = rng.matrix(2, 2);
      // Linear functional <GQ, Q> + <GR, R>; its theta-gradient via pullback.
      auto f = [&](const Eigen::VectorXd& th) {
        const CostWeights cw = par.weights(th);
        return (GQ.array() * cw.Q.array()).sum() +
               (GR.array() * cw.R.array()).sum();
      };
      const Eigen::VectorXd fd = testing::central_difference(f, theta);
      const Eigen::VectorXd g = par.pullback(theta, {GQ, GR});
      EXPECT_LT((fd - g).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(IocConfig, Validation) {
  IocConfig cfg;
  EXPECT_NO_THROW(cfg.validate(2));
  cfg.restarts = 0;
  EXPECT_THROW(cfg.validate(2), ConfigError);
  cfg = {};
  cfg.objective_tolerance = 0.0;
  EXPECT_THROW(cfg.validate(2), ConfigError);
  cfg = {};
  cfg.normalization = Normalization::kFixRScalar;
  EXPECT_THROW(cfg.validate(2), ConfigError);
  EXPECT_NO_THROW(cfg.validate(1));
  EXPECT_EQ(parse_structure("diagonal"), Structure::kDiagonal);
  EXPECT_EQ(parse_normalization("fix_r_scalar"), Normalization::kFixRScalar);
  EXPECT_EQ(parse_gradient_mode("analytic"), GradientMode::kAnalytic);
  EXPECT_THROW(parse_structure("banded"), ConfigError);
}

void expect_result_invariants(const IocResult& r, Normalization mode) {
  EXPECT_LT(max_abs(r.Q_hat - r.Q_hat.transpose()), 1e-12);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(r.Q_hat)
                .eigenvalues()
                .minCoeff(),
            -1e-10);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(r.R_hat)
                .eigenvalues()
                .minCoeff(),
            1e-6);
  if (mode == Normalization::kTraceR) {
    EXPECT_NEAR(r.R_hat.trace() / r.R_hat.rows(), 1.0, 1e-9);
  } else {
    EXPECT_EQ(r.R_hat(0, 0), 1.0);
  }
}

TEST(SolveIoc, RecoversNoiselessWeights) {
  const Dataset data = lqr_data(second_order(), mpc_weights(), 10, 30, 3);
  for (GradientMode mode :
       {GradientMode::kFiniteDifference, GradientMode::kAnalytic}) {
    for (Structure rs : {Structure::kDiagonal, Structure::kFull}) {
      IocConfig cfg;
      cfg.gradient_mode = mode;
      cfg.r_structure = rs;
      const IocResult r = solve_ioc(second_order(), data, cfg);
      EXPECT_TRUE(r.converged);
      expect_result_invariants(r, cfg.normalization);
      EXPECT_LT((r.Q_hat - mpc_weights().Q).norm() / mpc_weights().Q.norm(),
                1e-3);
      EXPECT_LT((r.R_hat - mpc_weights().R).norm() / mpc_weights().R.norm(),
                1e-3);
      EXPECT_EQ(r.per_trajectory_rmse.size(), 10u);
    }
  }
}

TEST(SolveIoc, ScalarInputFixesR) {
  const LinearSystem sys(second_order().A(), Eigen::Vector2d(0.0, 0.5));
  const CostWeights truth{Eigen::Matrix2d{{2.0, 0.5}, {0.5, 1.0}},
                          Eigen::MatrixXd::Constant(1, 1, 4.0)};
  IocConfig cfg;
  cfg.normalization = Normalization::kFixRScalar;
  const IocResult r = solve_ioc(sys, lqr_data(sys, truth, 8, 25, 4), cfg);
  expect_result_invariants(r, cfg.normalization);
  EXPECT_LT(max_abs(r.Q_hat - truth.Q / 4.0), 1e-4);
}

TEST(SolveIoc, DiagonalStructureIsRespected) {
  const Dataset data = lqr_data(second_order(), mpc_weights(), 5, 20, 5);
  IocConfig cfg;
  cfg.structure = Structure::kDiagonal;
  const IocResult r = solve_ioc(second_order(), data, cfg);
  EXPECT_EQ(r.Q_hat(0, 1), 0.0);
  EXPECT_EQ(r.R_hat(0, 1), 0.0);
}

TEST(SolveIoc, DeterministicGivenSeed) {
  Dataset data = lqr_data(second_order(), mpc_weights(), 6, 20, 6);
  PropertyRng rng(10);
  for (Trajectory& t : data.trajectories) t.states += 0.01 * rng.matrix(2, 20);
  const IocResult a = solve_ioc(second_order(), data, {});
  const IocResult b = solve_ioc(second_order(), data, {});
  EXPECT_EQ(a.Q_hat, b.Q_hat);
  EXPECT_EQ(a.R_hat, b.R_hat);
  EXPECT_EQ(a.objective, b.objective);
}

TEST(SolveIoc, EmptyDatasetIsAnError) {
  EXPECT_THROW(solve_ioc(second_order(), Dataset{}, {}), ArgumentError);
}

TEST(Bfgs, MinimizesRosenbrock) {
  const SmoothObjective rosen = [](const Eigen::VectorXd& x,
                                   Eigen::VectorXd* g) {
    const double a = 1.0 - x(0);
    const double b = x(1) - x(0) * x(0);
    if (g) {
      g->resize(2);
      (*g)(0) = -2.0 * a - 400.0 * x(0) * b;
      (*g)(1) = 200.0 * b;
    }
    return a * a + 100.0 * b * b;
  };
  BfgsOptions opts;
  opts.objective_tolerance = 0.0;
  opts.gradient_tolerance = 1e-10;
  const BfgsResult r = minimize_bfgs(rosen, Eigen::Vector2d(-1.2, 1.0), opts);
  EXPECT_TRUE(r.converged());
  EXPECT_LT((r.x - Eigen::Vector2d(1, 1)).norm(), 1e-7);
}

}  // namespace
}  // namespace invlqr
