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
#include "rhgc/instances.hpp"
#include "rhgc/reformulate.hpp"

#include <gtest/gtest.h>

namespace rhgc {
namespace {

// J(x, u) by simulating the original recursion
double rollout_cost(const QuadraticInstance& q, const std::vector<Vector>& u) {
  Vector x = q.x0;
  double J = 0.0;
  for (int t = 0; t < q.horizon(); ++t) {
    const Vector d = x - q.theta[t];
    J += 0.5 * d.dot(q.Q[t] * d) + 0.5 * u[t].dot(q.R[t] * u[t]);
    x = q.system.A * x + q.system.B * u[t];
  }
  const Vector d = x - q.theta.back();
  return J + 0.5 * d.dot(q.Q.back() * d);
}

TEST(Reformulate, HistoryComesFromInitialState) {
  const QuadraticInstance q = random_general_instance(4, 2, 6, 3);
  const CanonicalSystem& sys = q.system;
  const ZPath z(sys, 6, q.x0);
  EXPECT_TRUE(state_at(sys, z, 0).isApprox(q.x0));
  for (int s = 1 - sys.p; s <= 0; ++s) EXPECT_EQ(z[s].size(), sys.m());
}

TEST(Reformulate, StatesAndZRoundTrip) {
  const QuadraticInstance q = random_general_instance(4, 2, 8, 4);
  const CanonicalSystem& sys = q.system;
  std::vector<Vector> x{q.x0};
  Rng rng(9);
  for (int t = 0; t < 8; ++t) {
    Vector u(sys.m());
    for (int j = 0; j < sys.m(); ++j) u(j) = rng.normal();
    x.push_back(sys.A * x.back() + sys.B * u);
  }
  const ZPath z = z_of_states(sys, x);
  for (int t = 0; t <= 8; ++t) EXPECT_LT((state_at(sys, z, t) - x[t]).norm(), 1e-10);
  for (int t = 0; t < 8; ++t) {
    const Vector u = control_at(sys, z, t);
    EXPECT_LT((sys.A * x[t] + sys.B * u - x[t + 1]).norm(), 1e-10);
  }
}

TEST(Reformulate, TotalCostMatchesRollout) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const QuadraticInstance q = random_general_instance(3, 1 + seed % 2, 10, seed);
    const Instance inst = q.to_instance();
    Rng rng(seed + 100);
    std::vector<Vector> u;
    std::vector<Vector> x{q.x0};
    for (int t = 0; t < 10; ++t) {
      Vector ut(q.system.m());
      for (int j = 0; j < ut.size(); ++j) ut(j) = rng.normal();
      u.push_back(ut);
      x.push_back(q.system.A * x.back() + q.system.B * ut);
    }
    const ZPath z = z_of_states(q.system, x);
    EXPECT_NEAR(total_cost(inst, z), rollout_cost(q, u), 1e-8 * (1 + rollout_cost(q, u)));
  }
}

TEST(Reformulate, PartialGradientMatchesFullGradient) {
  const QuadraticInstance q = random_general_instance(3, 2, 9, 21);
  const Instance inst = q.to_instance();
  const CanonicalSystem& sys = inst.system;
  ZPath z(sys, 9, q.x0);
  Rng rng(1);
  for (int s = 1; s <= 9; ++s) {
    for (int j = 0; j < sys.m(); ++j) z[s](j) = rng.normal();
  }
  const Vector full = full_gradient(inst, z);
  for (int t = 1; t <= 9; ++t) {
    std::vector<Vector> w;
    for (int s = t - sys.p; s <= t + sys.p; ++s) w.push_back(s <= 9 ? z[s] : Vector::Zero(sys.m()));
    const Vector g = partial_gradient(sys, inst.costs, t, w);
    EXPECT_LT((g - full.segment((t - 1) * sys.m(), sys.m())).norm(), 1e-10);
  }
  EXPECT_EQ(partial_gradient_cost(sys.p), 2 * sys.p + 1);
}

TEST(Reformulate, QuadraticFormReproducesCost) {
  const QuadraticInstance q = random_general_instance(2, 1, 7, 8);
  const Instance inst = q.to_instance();
  const QuadraticForm qf = quadratic_form(inst);
  ZPath z(inst.system, 7, q.x0);
  Rng rng(3);
  for (int s = 1; s <= 7; ++s) z[s](0) = rng.normal();
  const Vector v = z.stacked();
  EXPECT_NEAR(0.5 * v.dot(qf.H * v) + qf.c.dot(v) + qf.d, total_cost(inst, z), 1e-8);
  EXPECT_LT((qf.H * v + qf.c - full_gradient(inst, z)).norm(), 1e-9);
}

TEST(Reformulate, WindowOfWrongLengthIsRejected) {
  const QuadraticInstance q = random_general_instance(2, 1, 5, 2);
  const Instance inst = q.to_instance();
  std::vector<Vector> w(2, Vector::Zero(1));
  EXPECT_THROW(partial_gradient(inst.system, inst.costs, 1, w), Error);
}

}  // namespace
}  // namespace rhgc
