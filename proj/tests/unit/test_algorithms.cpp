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
#include "rhgc/baselines.hpp"
#include "rhgc/instances.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace rhgc {
namespace {

TEST(Algorithms, StepSizesAtZetaFour) {
  const StepSizes s = compute_stepsizes(4.0, 4.0);
  EXPECT_DOUBLE_EQ(s.phi, 0.5);
  EXPECT_DOUBLE_EQ(s.gamma_g, 0.25);
  EXPECT_DOUBLE_EQ(s.gamma_c, 0.375);
  EXPECT_NEAR(s.gamma_omega, 1.0 / 6, 1e-15);
  EXPECT_NEAR(s.gamma_y, 1.0 / 9, 1e-15);
  EXPECT_NEAR(s.gamma_z, 1.0 / 3, 1e-15);
}

TEST(Algorithms, StepSizeArgumentsAreChecked) {
  try {
    compute_stepsizes(0.0, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonPositiveConstant);
  }
  try {
    compute_stepsizes(1.0, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidConditionNumber);
  }
}

TEST(Algorithms, IterationCount) {
  EXPECT_EQ(iterations_for_window(1, 2), 0);
  EXPECT_EQ(iterations_for_window(2, 2), 0);
  EXPECT_EQ(iterations_for_window(3, 2), 1);
  EXPECT_EQ(iterations_for_window(13, 2), 6);
  EXPECT_EQ(iterations_for_window(7, 3), 2);
}

TEST(Algorithms, BoundFactors) {
  EXPECT_NEAR(gd_bound_factor(4.0, 2), 4.0 * 0.5625, 1e-15);
  EXPECT_NEAR(tm_bound_factor(4.0, 1), 16.0 * 0.25, 1e-15);
}

// Triple momentum written out on the explicit quadratic 0.5 z'Hz + c'z.
Vector triple_momentum_oracle(const Matrix& H, const Vector& c, const Vector& z0, int iterations,
                              double L, double kappa) {
  const double rho = 1.0 - 1.0 / std::sqrt(kappa);
  const double alpha = (1.0 + rho) / L;
  const double beta = rho * rho / (2.0 - rho);
  const double gamma = rho * rho / ((1.0 + rho) * (2.0 - rho));
  const double delta = rho * rho / (1.0 - rho * rho);
  Vector xi_prev = z0;
  Vector xi = z0;
  Vector out = z0;
  for (int k = 0; k < iterations; ++k) {
    const Vector y = (1.0 + gamma) * xi - gamma * xi_prev;
    const Vector next = (1.0 + beta) * xi - beta * xi_prev - alpha * (H * y + c);
    xi_prev = xi;
    xi = next;
    out = (1.0 + delta) * xi - delta * xi_prev;
  }
  return out;
}

TEST(Algorithms, BatchTripleMomentumMatchesIndependentLoop) {
  const QuadraticInstance q = random_general_instance(3, 1, 12, 31);
  const Instance inst = q.to_instance();
  const QuadraticForm qf = quadratic_form(inst);
  const Smoothness sm = smoothness_params(inst);
  ZPath z0(inst.system, 12, q.x0);
  Rng rng(2);
  for (int s = 1; s <= 12; ++s) z0[s](0) = rng.normal();
  for (int K : {1, 2, 5, 20}) {
    const ZPath zk =
        batch_recursion(inst, z0, K, triple_momentum_recursion(compute_stepsizes(sm.l_c, sm.zeta)));
    const Vector ref = triple_momentum_oracle(qf.H, qf.c, z0.stacked(), K, sm.l_c, sm.zeta);
    EXPECT_LT((zk.stacked() - ref).norm(), 1e-9 * (1 + ref.norm())) << "K " << K;
  }
  // and it converges to the minimizer
  const ZPath far =
      batch_recursion(inst, z0, 4000, triple_momentum_recursion(compute_stepsizes(sm.l_c, sm.zeta)));
  const Vector zstar = qf.H.ldlt().solve(-qf.c);
  EXPECT_LT((far.stacked() - zstar).norm(), 1e-6 * (1 + zstar.norm()));
}

TEST(Algorithms, BatchGradientDescentMatchesExplicitSteps) {
  const QuadraticInstance q = random_general_instance(2, 1, 8, 5);
  const Instance inst = q.to_instance();
  const QuadraticForm qf = quadratic_form(inst);
  ZPath z0(inst.system, 8, q.x0);
  const double step = 1.0 / smoothness_params(inst).l_c;
  Vector v = z0.stacked();
  for (int k = 0; k < 7; ++k) v -= step * (qf.H * v + qf.c);
  EXPECT_LT((batch_gradient_descent(inst, z0, 7, step).stacked() - v).norm(), 1e-10);
}

TEST(Algorithms, OnlineRunsStayInsideTheLookahead) {
  const QuadraticInstance q = random_general_instance(3, 2, 20, 8);
  const Instance inst = q.to_instance();
  const FossOracle foss;
  for (int W : {1, 4, 7}) {
    for (const OnlineRun& run : {rhgd_run(inst, W, foss), rhtm_run(inst, W, foss), rhag_run(inst, W, foss)}) {
      ASSERT_EQ(static_cast<int>(run.max_stage_read.size()), 20 + W - 1);
      for (int i = 0; i < static_cast<int>(run.max_stage_read.size()); ++i) {
        const int t = 1 - W + i;
        EXPECT_LE(run.max_stage_read[i], std::min(t + W - 1, 20)) << run.algorithm << " W " << W;
      }
    }
  }
}

TEST(Algorithms, ZeroIterationsReproduceTheOracle) {
  const QuadraticInstance q = random_general_instance(2, 1, 15, 12);
  const Instance inst = q.to_instance();
  const FossOracle foss;
  const OnlineRun base = oracle_run(inst, foss);
  for (const OnlineRun& run : {rhgd_run(inst, 2, foss), rhtm_run(inst, 1, foss)}) {
    EXPECT_EQ(run.K, 0);
    EXPECT_NEAR(run.cost, base.cost, 1e-9 * (1 + std::abs(base.cost)));
    EXPECT_EQ(run.gradient_evaluations, 0);
  }
}

TEST(Algorithms, GradientBudget) {
  const QuadraticInstance q = random_general_instance(2, 1, 15, 12);
  const Instance inst = q.to_instance();
  const OnlineRun run = rhgd_run(inst, 5, FossOracle{});
  // p = 2, K = 2, one partial gradient per stage per iteration
  EXPECT_EQ(run.K, 2);
  EXPECT_EQ(run.gradient_evaluations, 15L * 2 * 5);
}

TEST(Algorithms, ShortWindowIsRejected) {
  const QuadraticInstance q = random_general_instance(2, 1, 10, 1);
  try {
    rhgd_run(q.to_instance(), 0, FossOracle{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WindowTooShort);
  }
}

TEST(Algorithms, NegativeRegretIsRejected) {
  OnlineRun run;
  run.algorithm = "rhgd";
  run.cost = 10.0;
  EXPECT_NO_THROW(dynamic_regret(run, 10.0 + 1e-9, 2.0));
  try {
    dynamic_regret(run, 11.0, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NegativeRegretBeyondTolerance);
  }
}

TEST(Algorithms, RegretShrinksWithLookahead) {
  const QuadraticInstance q = random_general_instance(2, 1, 30, 14);
  const Instance inst = q.to_instance();
  const double J = offline_optimal(q).J;
  const FossOracle foss;
  double prev = oracle_run(inst, foss).cost - J;
  for (int W : {3, 7, 11, 21}) {
    const double r = rhgd_run(inst, W, foss).cost - J;
    EXPECT_LE(r, prev * 1.000001) << "W " << W;
    prev = r;
  }
}

TEST(Algorithms, ReplayOfTheOptimumHasNoRegret) {
  const QuadraticInstance q = random_general_instance(3, 1, 12, 6);
  const OfflineOptimum opt = offline_optimal(q);
  const OnlineRun run = oracle_run(q.to_instance(), ReplayOracle(opt.z));
  EXPECT_NEAR(run.cost, opt.J, 1e-8 * (1 + std::abs(opt.J)));
}

}  // namespace
}  // namespace rhgc
