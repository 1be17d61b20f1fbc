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
#include "rhgc/canonical.hpp"
#include "rhgc/instances.hpp"
#include "rhgc/reformulate.hpp"

#include <gtest/gtest.h>

#include <Eigen/QR>

namespace rhgc {
namespace {

// smallest k with rank [B, AB, ..., A^{k-1}B] = n
int controllability_index(const Matrix& A, const Matrix& B) {
  const int n = static_cast<int>(A.rows());
  Matrix C(n, 0);
  Matrix blk = B;
  for (int k = 1; k <= n; ++k) {
    Matrix next(n, C.cols() + B.cols());
    next << C, blk;
    C = next;
    if (Eigen::FullPivHouseholderQR<Matrix>(C).rank() == n) return k;
    blk = A * blk;
  }
  return -1;
}

TEST(Canonical, ExampleSystemIsAlreadyCanonical) {
  Matrix A(2, 2);
  A << 0, 1, -1.0 / 6, 5.0 / 6;
  Matrix B(2, 1);
  B << 0, 1;
  const CanonicalSystem c = verify_canonical(A, B);
  EXPECT_EQ(c.p, 2);
  ASSERT_EQ(c.actuated.size(), 1u);
  EXPECT_EQ(c.actuated[0], 1);
  EXPECT_TRUE(c.S_x.isIdentity());
  EXPECT_TRUE(c.S_u.isIdentity());
  EXPECT_EQ(controllability_rank(A, B), 2);
}

TEST(Canonical, BrokenPatternNamesTheEntry) {
  Matrix A(2, 2);
  A << 0.5, 1, -1.0 / 6, 5.0 / 6;
  Matrix B(2, 1);
  B << 0, 1;
  try {
    verify_canonical(A, B);
    FAIL() << "expected NotCanonical";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotCanonical);
    EXPECT_EQ(e.row, 0);
    EXPECT_EQ(e.col, 0);
  }
}

TEST(Canonical, RandomPairsRoundTrip) {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 4;
    const int m = 1 + trial % std::min(n, 3);
    const LtiSystem sys = random_controllable_system(n, m, rng);
    const CanonicalSystem c = to_canonical(sys);
    const Matrix Sx_inv = c.S_x.inverse();
    EXPECT_LT((c.A - c.S_x * sys.A * Sx_inv).norm(), 1e-8 * (1 + c.A.norm())) << "trial " << trial;
    EXPECT_LT((c.B - c.S_x * sys.B * c.S_u.inverse()).norm(), 1e-8) << "trial " << trial;
    EXPECT_NO_THROW(verify_canonical(c.A, c.B, 1e-8)) << "trial " << trial;
    EXPECT_EQ(c.p, controllability_index(sys.A, sys.B)) << "trial " << trial;
    int total = 0;
    for (int l : c.block_len) total += l;
    EXPECT_EQ(total, n);
  }
}

TEST(Canonical, TwoInputBlocks) {
  // two chains of length 2 and 1 put together by hand
  Matrix A(3, 3);
  A << 0, 1, 0, 0.3, -0.2, 0.5, 0.1, 0.4, -0.7;
  Matrix B(3, 2);
  B << 0, 0, 1, 0, 0, 1;
  const CanonicalSystem c = verify_canonical(A, B);
  EXPECT_EQ(c.p, 2);
  EXPECT_EQ(c.block_len, (std::vector<int>{2, 1}));
  EXPECT_EQ(c.actuated, (std::vector<int>{1, 2}));
  EXPECT_TRUE(c.A_I().isApprox(A.bottomRows(2)));
}

TEST(Canonical, UncontrollablePairIsRejected) {
  Matrix A = Matrix::Zero(2, 2);
  A(0, 0) = 1;
  A(1, 1) = 2;
  Matrix B(2, 1);
  B << 1, 0;
  try {
    to_canonical({A, B});
    FAIL() << "expected NotControllable";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotControllable);
  }
}

TEST(Canonical, RankDeficientInputMatrixIsIllConditioned) {
  Matrix A(3, 3);
  A << 0, 1, 0, 0, 0, 1, 0.2, 0.1, 0.3;
  Matrix B(3, 2);
  B << 0, 0, 0, 0, 1, 1;
  try {
    to_canonical({A, B});
    FAIL() << "expected IllConditioned";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IllConditioned);
  }
}

TEST(Canonical, DimensionMismatch) {
  try {
    to_canonical({Matrix::Zero(2, 3), Matrix::Zero(2, 1)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(Canonical, TransformedCostsAgreeInOriginalCoordinates) {
  Rng rng(5);
  const LtiSystem sys = random_controllable_system(3, 1, rng);
  const CanonicalSystem c = to_canonical(sys);
  Matrix Q = Matrix::Identity(3, 3);
  Q(0, 1) = Q(1, 0) = 0.3;
  Vector theta(3);
  theta << 1, -2, 0.5;
  std::vector<StageCostPtr> f{std::make_shared<QuadraticCost>(Q, theta),
                              std::make_shared<LogCoshCost>(1.0, 0.5, theta)};
  std::vector<StageCostPtr> g{std::make_shared<QuadraticCost>(2.0 * Matrix::Identity(1, 1))};
  const CostSequence orig(f, g, 0.7, 1.5, 2.0);
  const CostSequence canon = transform_costs(orig, c.S_x, c.S_u);
  for (int k = 0; k < 5; ++k) {
    const Vector x = Vector::Random(3);
    const Vector u = Vector::Random(1);
    for (int t = 0; t < 2; ++t) {
      EXPECT_NEAR(canon.f(t).value(c.S_x * x), orig.f(t).value(x), 1e-9);
    }
    EXPECT_NEAR(canon.g(0).value(c.S_u * u), orig.g(0).value(u), 1e-12);
  }
  EXPECT_TRUE(canon.f(0).hessian().has_value());
  EXPECT_FALSE(canon.f(1).hessian().has_value());
}

TEST(Canonical, ExampleSmoothnessConstant) {
  // l_c = 2 l_f + 3 l_g (1 + a1^2 + a2^2) for the two-state chain
  const CanonicalSystem c = example_system();
  const double l_f = 2.0;
  const double l_g = 1.5;
  const Smoothness s = smoothness_params(c, 1.0, l_f, l_g);
  const double a1 = -1.0 / 6;
  const double a2 = 5.0 / 6;
  EXPECT_NEAR(s.l_c, 2 * l_f + 3 * l_g * (1 + a1 * a1 + a2 * a2), 1e-12);
  EXPECT_DOUBLE_EQ(s.mu_c, 1.0);
  EXPECT_NEAR(s.zeta, s.l_c, 1e-12);
}

}  // namespace
}  // namespace rhgc
