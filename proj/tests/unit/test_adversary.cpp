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
#include "rhgc/adversary.hpp"
#include "rhgc/reformulate.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

namespace rhgc {
namespace {

TEST(Adversary, DerivedParameters) {
  const LowerBoundInstance lb = build_instance(5.0, 2, 30, 8.0, 1.0, 7);
  EXPECT_DOUBLE_EQ(lb.delta, 0.5);
  EXPECT_NEAR(lb.sigma, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(lb.quad.system.n(), 2);
  EXPECT_EQ(lb.quad.system.p, 2);
  EXPECT_NEAR(lb.L() / lb.mu(), 5.0, 1e-12);
  EXPECT_EQ(lb.epochs, static_cast<int>(lb.epoch_starts.size()));
}

TEST(Adversary, TargetsRespectTheVariationBudget) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const LowerBoundInstance lb = build_instance(5.0, 2, 30, 8.0, 1.0, seed);
    const auto& th = lb.quad.theta;
    EXPECT_LT(th.front().norm(), 1e-15);
    EXPECT_LT(th.back().norm(), 1e-15);
    double len = 0.0;
    for (std::size_t t = 1; t < th.size(); ++t) len += (th[t] - th[t - 1]).norm();
    EXPECT_LE(len, 8.0 + 1e-12) << "seed " << seed;
    for (std::size_t t = 1; t + 1 < th.size(); ++t) {
      for (int i = 0; i < th[t].size(); ++i) EXPECT_NEAR(std::abs(th[t](i)), lb.sigma, 1e-15);
    }
  }
}

TEST(Adversary, InadmissibleParameters) {
  for (auto bad : {std::make_tuple(1.0, 2, 30, 8.0, 1.0), std::make_tuple(5.0, 0, 30, 8.0, 1.0),
                   std::make_tuple(5.0, 2, 30, 3.0, 1.0), std::make_tuple(5.0, 2, 30, 70.0, 1.0)}) {
    try {
      build_instance(std::get<0>(bad), std::get<1>(bad), std::get<2>(bad), std::get<3>(bad),
                     std::get<4>(bad), 1);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InadmissibleParameters);
    }
  }
}

TEST(Adversary, AssembledHessianMatchesGenericForm) {
  const LowerBoundInstance lb = build_instance(10.0, 3, 12, 12.0, 1.0, 4);
  const HSystem hs = assemble_h_system(lb);
  const QuadraticForm qf = quadratic_form(lb.quad.to_instance());
  EXPECT_LT((hs.H - qf.H).norm(), 1e-10);
  EXPECT_LT((hs.eta + qf.c).norm(), 1e-10);
  const Eigen::SelfAdjointEigenSolver<Matrix> es(hs.H);
  EXPECT_GE(es.eigenvalues().minCoeff(), lb.mu() - 1e-10);
  EXPECT_LE(es.eigenvalues().maxCoeff(), lb.L() + 1e-10);
}

TEST(Adversary, SteadyStateRiccatiForm) {
  for (double zeta : {2.0, 5.0, 10.0}) {
    for (int p = 1; p <= 4; ++p) {
      const PeCheck c = verify_pe_form(zeta, p);
      EXPECT_TRUE(c.passed()) << zeta << " " << p;
      // q_n from its own quadratic: q^2 - n delta q - n delta = 0
      const double nd = p * c.delta;
      EXPECT_NEAR(c.q(p - 1), (nd + std::sqrt(nd * nd + 4 * nd)) / 2, 1e-9);
    }
  }
}

TEST(Adversary, InverseDecay) {
  const YDecayCheck y = verify_y_decay(5.0, 2, 40);
  EXPECT_TRUE(y.passed());
  const YDecayCheck s = verify_y_decay(5.0, 3, 31);
  EXPECT_TRUE(s.skipped);
  EXPECT_FALSE(s.passed());
  EXPECT_FALSE(s.reason.empty());
}

TEST(Adversary, WindowAdmissibility) {
  EXPECT_TRUE(window_admissible(10, 30));
  EXPECT_FALSE(window_admissible(11, 30));
  EXPECT_FALSE(window_admissible(0, 30));
}

TEST(Adversary, EmpiricalLowerBoundIsPositive) {
  const LowerBoundEstimate e =
      empirical_lower_bound("rhgd", 5.0, 2, 30, 8.0, 1.0, {1, 2, 3, 4, 5}, {0, 1, 2, 3});
  ASSERT_EQ(e.K.size(), 4u);
  EXPECT_EQ(e.W, (std::vector<int>{1, 3, 5, 7}));
  EXPECT_GT(e.c1, 0.0);
  for (std::size_t i = 0; i < e.K.size(); ++i) {
    EXPECT_LE(e.mean_regret[i], e.upper_bound[i] * (1 + 1e-9));
    EXPECT_GE(e.mean_regret[i], e.c1 * e.lower_curve[i] * (1 - 1e-9));
  }
}

}  // namespace
}  // namespace rhgc
