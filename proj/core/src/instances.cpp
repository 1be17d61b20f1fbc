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

#include <cmath>

namespace rhgc {
namespace {

Matrix random_diag(Rng& rng, int d, double lo, double hi) {
  Matrix D = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) D(i, i) = rng.uniform(lo, hi);
  return D;
}

Vector random_vector(Rng& rng, int d, double lo, double hi) {
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

Matrix random_orthogonal(Rng& rng, int d) {
  Matrix G(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) G(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Matrix> qr(G);
  return qr.householderQ() * Matrix::Identity(d, d);
}

double cond(const Matrix& M) {
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

}  // namespace

CanonicalSystem example_system() {
  Matrix A(2, 2);
  A << 0.0, 1.0, -1.0 / 6.0, 5.0 / 6.0;
  Matrix B(2, 1);
  B << 0.0, 1.0;
  return verify_canonical(A, B);
}

QuadraticInstance random_tracking_instance(const CanonicalSystem& sys, int N,
                                           const RandomCostSpec& spec, std::uint64_t seed) {
  if (N < 1) throw Error(ErrorKind::LengthMismatch, "horizon must be at least 1");
  if (spec.terminal != "stage" && spec.terminal != "bias") {
    throw Error(ErrorKind::ConfigError, "terminal must be stage or bias");
  }
  if (spec.terminal == "bias" && !spec.time_invariant) {
    throw Error(ErrorKind::ConfigError, "a bias-function terminal cost needs time-invariant costs");
  }
  const int n = sys.n();
  const int m = sys.m();
  Rng rng(seed);
  QuadraticInstance q;
  q.system = sys;
  q.x0 = Vector::Zero(n);
  for (int t = 0; t <= N; ++t) {
    if (spec.time_invariant && t > 0) {
      q.Q.push_back(q.Q.front());
      q.theta.push_back(q.theta.front());
      if (t < N) q.R.push_back(q.R.front());
      continue;
    }
    q.Q.push_back(random_diag(rng, n, spec.q_lo, spec.q_hi));
    q.theta.push_back(random_vector(rng, n, spec.theta_lo, spec.theta_hi));
    if (t < N) q.R.push_back(random_diag(rng, m, spec.r_lo, spec.r_hi));
  }
  if (spec.terminal == "bias") {
    const BiasFunction h = bias_function(sys.A, sys.B, q.Q.front(), q.R.front(), q.theta.front());
    q.Q.back() = h.P;
    q.theta.back() = h.beta;
  }
  return q;
}

LtiSystem random_controllable_system(int n, int m, Rng& rng) {
  for (;;) {
    LtiSystem sys{Matrix(n, n), Matrix(n, m)};
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) sys.A(i, j) = rng.normal() / std::sqrt(static_cast<double>(n));
      for (int j = 0; j < m; ++j) sys.B(i, j) = rng.normal();
    }
    try {
      const CanonicalSystem c = to_canonical(sys);
      if (cond(c.S_x) < 1e4 && c.A.cwiseAbs().maxCoeff() < 1e2) return sys;
    } catch (const Error&) {
      // redraw
    }
  }
}

QuadraticInstance canonical_quadratic_instance(const LtiSystem& sys, const std::vector<Matrix>& Q,
                                               const std::vector<Matrix>& R,
                                               const std::vector<Vector>& theta, const Vector& x0) {
  const CanonicalSystem c = to_canonical(sys);
  const Matrix Sx_inv = c.S_x.inverse();
  const Matrix Su_inv = c.S_u.inverse();
  QuadraticInstance q;
  q.system = c;
  for (const auto& Qt : Q) {
    const Matrix M = Sx_inv.transpose() * Qt * Sx_inv;
    q.Q.push_back(0.5 * (M + M.transpose()));
  }
  for (const auto& Rt : R) {
    const Matrix M = Su_inv.transpose() * Rt * Su_inv;
    q.R.push_back(0.5 * (M + M.transpose()));
  }
  for (const auto& th : theta) q.theta.push_back(c.S_x * th);
  q.x0 = c.S_x * x0;
  q.validate();
  return q;
}

QuadraticInstance random_general_instance(int n, int m, int N, std::uint64_t seed) {
  Rng rng(seed);
  const LtiSystem sys = random_controllable_system(n, m, rng);
  std::vector<Matrix> Q;
  std::vector<Matrix> R;
  std::vector<Vector> theta;
  for (int t = 0; t <= N; ++t) {
    const Matrix U = random_orthogonal(rng, n);
    Q.push_back(U * random_diag(rng, n, 1.0, 3.0) * U.transpose());
    theta.push_back(random_vector(rng, n, -5.0, 5.0));
    if (t < N) R.push_back(random_diag(rng, m, 0.5, 2.0));
  }
  const Vector x0 = random_vector(rng, n, -1.0, 1.0);
  return canonical_quadratic_instance(sys, Q, R, theta, x0);
}

}  // namespace rhgc
