/*
 Copyright 2026 The rhgc Authors

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
#include "rhgc/algorithms.hpp"
#include "rhgc/instances.hpp"
#include "rhgc/lqt.hpp"
#include "rhgc/robot.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace rhgc;

void BM_RhtmRun(benchmark::State& state) {
  const QuadraticInstance q = random_tracking_instance(example_system(), 30, RandomCostSpec{}, 1);
  const Instance inst = q.to_instance();
  const FossOracle foss;
  const int W = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rhtm_run(inst, W, foss).cost);
}
BENCHMARK(BM_RhtmRun)->Arg(3)->Arg(7)->Arg(13);

void BM_DpSolve(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const QuadraticInstance q = random_general_instance(4, 2, N, 3);
  for (auto _ : state) benchmark::DoNotOptimize(dp_solve(q).J);
}
BENCHMARK(BM_DpSolve)->Arg(30)->Arg(300);

void BM_PartialGradient(benchmark::State& state) {
  const QuadraticInstance q = random_general_instance(4, 2, 20, 5);
  const Instance inst = q.to_instance();
  const int p = inst.system.p;
  std::vector<Vector> window(2 * p + 1, Vector::Ones(inst.system.m()));
  for (auto _ : state) benchmark::DoNotOptimize(partial_gradient(inst.system, inst.costs, 10, window));
}
BENCHMARK(BM_PartialGradient);

void BM_RobotHeart(benchmark::State& state) {
  const int W = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(robot_rhgc(RobotConfig{}, "rhgd", W).executed_cost);
}
BENCHMARK(BM_RobotHeart)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
