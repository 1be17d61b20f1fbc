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
#pragma once

#include "rhgc/canonical.hpp"
#include "rhgc/reformulate.hpp"
#include "rhgc/types.hpp"

#include <vector>

namespace rhgc {

/// Tracking problem with f_t = 0.5 (x - theta_t)' Q_t (x - theta_t) for
/// t = 0..N (Q_N, theta_N terminal) and g_t = 0.5 u' R_t u.
struct QuadraticInstance {
  CanonicalSystem system;
  std::vector<Matrix> Q;
  std::vector<Matrix> R;
  std::vector<Vector> theta;
  Vector x0;

  int horizon() const { return static_cast<int>(R.size()); }
  /// Throws LengthMismatch / DimensionMismatch.
  void validate() const;
  /// Cost sequence with mu_f, l_f, l_g read off the eigenvalues of Q_t, R_t.
  CostSequence costs() const;
  Instance to_instance() const;
};

/// Backward Riccati pass and forward rollout.
/// u*_t = -K_t x_t + K'_t beta_{t+1} = -K_t x_t + K^alpha_t alpha_{t+1}.
struct DpSolution {
  std::vector<Matrix> P;        // 0..N
  std::vector<Vector> beta;     // 0..N
  std::vector<Vector> alpha;    // 0..N
  std::vector<Matrix> M;        // 0..N-1
  std::vector<Matrix> H;        // 0..N-1
  std::vector<Matrix> K;        // 0..N-1
  std::vector<Matrix> K_prime;  // 0..N-1
  std::vector<Matrix> K_alpha;  // 0..N-1
  std::vector<double> offset;   // 0.5 sum_{k>=t} (A theta_k - beta_{k+1})' H_k (...), 0..N

  std::vector<Vector> x;  // optimal states 0..N
  std::vector<Vector> u;  // optimal controls 0..N-1
  double J = 0.0;         // cost of the rollout

  /// Optimal cost-to-go V_t(x).
  double value(int t, const Vector& xt) const;
};

/// Throws SingularInnerMatrix if R_t + B'P_{t+1}B is not positive definite and
/// SingularReducedHessian if Q_t + A'M_t A is not.
DpSolution dp_solve(const QuadraticInstance& inst);

struct DareSolution {
  Matrix P;
  Matrix K;
  int iterations = 0;
  double residual = 0.0;
};

/// Value iteration from P = Q until |dP| <= 1e-12 or 1e5 sweeps.
/// Throws NoConvergence if the Riccati residual stays above 1e-9.
DareSolution solve_dare(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R);

/// Optimal steady state of 0.5 (x - theta)'Q(x - theta) + 0.5 u'Ru subject to
/// x = Ax + Bu, written through z: x = F1 z, u = (I - A_I F1) z, z = F2 theta.
struct SteadyState {
  Matrix F1;
  Matrix F2;
  Vector x;
  Vector u;
  Vector z;
};
Matrix steady_state_lift(const CanonicalSystem& sys);
SteadyState steady_state(const CanonicalSystem& sys, const Matrix& Q, const Matrix& R,
                         const Vector& theta);

/// argmin_z f(F1 z) + g((I - A_I F1) z) for general convex f, g. Quadratic costs
/// are solved in closed form; otherwise gradient descent with step
/// 1 / (l_f |F1|^2 + l_g |I - A_I F1|^2) to gradient norm 1e-10 or 1e5 steps.
/// Throws SteadyStateSolveFailed.
Vector optimal_steady_z(const CanonicalSystem& sys, const StageCost& f, const StageCost& g,
                        double l_f, double l_g);

/// Infinite-horizon quantities for time-invariant (Q, R, theta):
/// h(x) = 0.5 (x - beta)' P (x - beta) and average cost lambda.
struct BiasFunction {
  Matrix P;
  Matrix K;
  Matrix M;
  Matrix H;
  Vector beta;
  Vector alpha;
  double lambda = 0.0;

  double value(const Vector& x) const;
};
BiasFunction bias_function(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                           const Vector& theta);

/// Variation measures of a time-varying instance.
struct PathLengths {
  double theta = 0.0;             // sum_{t=0}^{N} |theta_t - theta_{t-1}|, theta_{-1} = 0
  double riccati = 0.0;           // sum_{t=1}^{N-1} |P^e_t - P^e_{t-1}|
  double riccati_terminal = 0.0;  // |Q_N - P^e_{N-1}|
  double beta = 0.0;              // sum_{t=1}^{N-1} |beta^e_t - beta^e_{t-1}|
  double beta_terminal = 0.0;     // |theta_N - beta^e_{N-1}|
  double steady_state = 0.0;      // sum_{t=0}^{N} |x^e_{t-1} - x^e_t|, x^e_{-1} = x0, x^e_N = theta_N
};
PathLengths path_lengths(const QuadraticInstance& inst);

}  // namespace rhgc
