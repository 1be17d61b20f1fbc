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
#include "rhgc/lqt.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace rhgc {
namespace {

// Minimizes the tracking cost over the stacked controls: x = Phi x0 + G u.
struct StackedSolution {
  Vector u;
  double J = 0.0;
};

StackedSolution stacked_solve(const QuadraticInstance& q) {
  const int N = q.horizon();
  const int n = q.system.n();
  const int m = q.system.m();
  Matrix Phi = Matrix::Zero(n * (N + 1), n);
  Matrix G = Matrix::Zero(n * (N + 1), m * N);
  Matrix Apow = Matrix::Identity(n, n);
  for (int t = 0; t <= N; ++t) {
    Phi.block(t * n, 0, n, n) = Apow;
    Apow = q.system.A * Apow;
  }
  for (int t = 1; t <= N; ++t) {
    for (int k = 0; k < t; ++k) {
      G.block(t * n, k * m, n, m) = Phi.block((t - 1 - k) * n, 0, n, n) * q.system.B;
    }
  }
  Matrix Qb = Matrix::Zero(n * (N + 1), n * (N + 1));
  Matrix Rb = Matrix::Zero(m * N, m * N);
  Vector th(n * (N + 1));
  for (int t = 0; t <= N; ++t) {
    Qb.block(t * n, t * n, n, n) = q.Q[t];
    th.segment(t * n, n) = q.theta[t];
  }
  for (int t = 0; t < N; ++t) Rb.block(t * m, t * m, m, m) = q.R[t];
  const Vector r = Phi * q.x0 - th;
  const Matrix Hs = G.transpose() * Qb * G + Rb;
  StackedSolution s;
  s.u = Hs.ldlt().solve(-G.transpose() * Qb * r);
  const Vector e = r + G * s.u;
  s.J = 0.5 * e.dot(Qb * e) + 0.5 * s.u.dot(Rb * s.u);
  return s;
}

TEST(Lqt, RiccatiMatchesStackedSolve) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const QuadraticInstance q = random_general_instance(2 + seed % 3, 1 + seed % 2, 25, seed);
    const DpSolution dp = dp_solve(q);
    const StackedSolution ref = stacked_solve(q);
    EXPECT_NEAR(dp.J, ref.J, 1e-8 * (1 + std::abs(ref.J))) << "seed " << seed;
    for (int t = 0; t < q.horizon(); ++t) {
      EXPECT_LT((dp.u[t] - ref.u.segment(t * q.system.m(), q.system.m())).norm(), 1e-6);
    }
    EXPECT_NEAR(dp.value(0, q.x0), ref.J, 1e-8 * (1 + std::abs(ref.J)));
  }
}

TEST(Lqt, ScalarDareClosedForm) {
  const double a = 1.3, b = 0.7, qq = 2.0, r = 0.5;
  Matrix A(1, 1), B(1, 1), Q(1, 1), R(1, 1);
  A << a;
  B << b;
  Q << qq;
  R << r;
  const DareSolution s = solve_dare(A, B, Q, R);
  // b^2 P^2 + (r (1 - a^2) - q b^2) P - q r = 0, positive root
  const double lin = r * (1 - a * a) - qq * b * b;
  const double P = (-lin + std::sqrt(lin * lin + 4 * b * b * qq * r)) / (2 * b * b);
  EXPECT_NEAR(s.P(0, 0), P, 1e-9 * P);
  EXPECT_NEAR(s.K(0, 0), a * b * P / (r + b * b * P), 1e-9);
}

TEST(Lqt, IntegratorSteadyStateSitsOnTarget) {
  CanonicalSystem sys = verify_canonical(Matrix::Identity(1, 1), Matrix::Identity(1, 1));
  Vector theta(1);
  theta << 3.5;
  const SteadyState ss = steady_state(sys, 2.0 * Matrix::Identity(1, 1), Matrix::Identity(1, 1), theta);
  EXPECT_NEAR(ss.x(0), 3.5, 1e-12);
  EXPECT_NEAR(ss.u(0), 0.0, 1e-12);
}

TEST(Lqt, SteadyStateSatisfiesDynamicsAndOptimality) {
  const CanonicalSystem sys = example_system();
  Matrix Q(2, 2);
  Q << 2, 0.3, 0.3, 1;
  const Matrix R = 0.7 * Matrix::Identity(1, 1);
  Vector theta(2);
  theta << 1, -4;
  const SteadyState ss = steady_state(sys, Q, R, theta);
  EXPECT_LT((sys.A * ss.x + sys.B * ss.u - ss.x).norm(), 1e-10);
  // stationarity on the manifold x = F u with F = (I - A)^{-1} B
  const Matrix F = (Matrix::Identity(2, 2) - sys.A).inverse() * sys.B;
  const Vector grad = F.transpose() * Q * (F * ss.u - theta) + R * ss.u;
  EXPECT_LT(grad.norm(), 1e-10);
}

TEST(Lqt, BiasFunctionSatisfiesAverageCostBellman) {
  const CanonicalSystem sys = example_system();
  const Matrix Q = Matrix::Identity(2, 2);
  const Matrix R = 2.0 * Matrix::Identity(1, 1);
  Vector theta(2);
  theta << 2, -1;
  const BiasFunction h = bias_function(sys.A, sys.B, Q, R, theta);
  Rng rng(4);
  for (int k = 0; k < 5; ++k) {
    Vector x(2);
    x << 3 * rng.normal(), 3 * rng.normal();
    // minimize f(x) + g(u) + h(Ax + Bu) over u in closed form
    const Matrix lhs = R + sys.B.transpose() * h.P * sys.B;
    const Vector u = lhs.ldlt().solve(-sys.B.transpose() * h.P * (sys.A * x - h.beta));
    const Vector d = x - theta;
    const double rhs = 0.5 * d.dot(Q * d) + 0.5 * u.dot(R * u) + h.value(sys.A * x + sys.B * u);
    EXPECT_NEAR(h.value(x) + h.lambda, rhs, 1e-8 * (1 + std::abs(rhs)));
  }
}

TEST(Lqt, PathLengthOfConstantTargetIsItsNorm) {
  QuadraticInstance q = random_tracking_instance(example_system(), 10, RandomCostSpec{}, 3);
  for (auto& th : q.theta) th = Vector::Ones(2);
  const PathLengths pl = path_lengths(q);
  EXPECT_NEAR(pl.theta, std::sqrt(2.0), 1e-12);
}

}  // namespace
}  // namespace rhgc
