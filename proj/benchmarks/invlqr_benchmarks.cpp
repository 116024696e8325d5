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
#include <benchmark/benchmark.h>

#include "invlqr/control.hpp"
#include "invlqr/ioc.hpp"
#include "invlqr/systems.hpp"
#include "invlqr_cli/workloads.hpp"

namespace {

using namespace invlqr;

const CostWeights kWeights{Eigen::Vector2d(0.3, 0.1).asDiagonal(),
                           Eigen::MatrixXd::Identity(2, 2)};

void BM_RiccatiSolve(benchmark::State& state) {
  const LinearSystem sys = cli::second_order_system();
  const int H = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(riccati_solve(sys, kWeights, H));
  }
}
BENCHMARK(BM_RiccatiSolve)->Arg(30)->Arg(200);

void BM_IocObjective(benchmark::State& state) {
  const LinearSystem sys = cli::second_order_system();
  const Dataset data = cli::lqr_dataset(
      sys, kWeights, static_cast<int>(state.range(0)), 30, 0.01, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ioc_objective(sys, kWeights, data));
  }
}
BENCHMARK(BM_IocObjective)->Arg(10)->Arg(30);

void BM_IocGradient(benchmark::State& state) {
  const LinearSystem sys = cli::second_order_system();
  const Dataset data = cli::lqr_dataset(sys, kWeights, 30, 30, 0.01, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ioc_objective_gradient(sys, kWeights, data));
  }
}
BENCHMARK(BM_IocGradient);

void BM_SolveIoc(benchmark::State& state) {
  const LinearSystem sys = cli::second_order_system();
  const Dataset data = cli::lqr_dataset(sys, kWeights, 30, 30, 0.01, 1);
  IocConfig cfg;
  cfg.gradient_mode = state.range(0) == 0 ? GradientMode::kFiniteDifference
                                          : GradientMode::kAnalytic;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_ioc(sys, data, cfg));
  }
  state.SetLabel(to_string(cfg.gradient_mode));
}
BENCHMARK(BM_SolveIoc)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_NmpcStep(benchmark::State& state) {
  const PendulumPlant plant{PendulumParams{}};
  const CostWeights w{Eigen::Vector2d(1000, 100).asDiagonal(),
                      Eigen::MatrixXd::Identity(1, 1)};
  const ReferenceSignal ref{Eigen::Vector2d(0.02, 0.0),
                            Eigen::VectorXd::Constant(
                                1, equilibrium_input(PendulumParams{}, 0.02))};
  const Eigen::VectorXd x = Eigen::Vector2d(0.25, -0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nmpc_step(plant, w, x, ref, 5));
  }
}
BENCHMARK(BM_NmpcStep);

}  // namespace

BENCHMARK_MAIN();
