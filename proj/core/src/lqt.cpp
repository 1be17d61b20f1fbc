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
#include "rhgc/lqt.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rhgc {
namespace {

double spectral_norm(const Matrix& M) {
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

Matrix sym(const Matrix& M) { return 0.5 * (M + M.transpose()); }

std::pair<double, double> eig_range(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym(S), Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(0), es.eigenvalues()(es.eigenvalues().size() - 1)};
}

}  // namespace

void QuadraticInstance::validate() const {
  const int N = horizon();
  const int n = system.n();
  const int m = system.m();
  if (N < 1) throw Error(ErrorKind::LengthMismatch, "horizon must be at least 1");
  if (static_cast<int>(Q.size()) != N + 1 || static_cast<int>(theta.size()) != N + 1) {
    std::ostringstream os;
    os << "need N + 1 = " << N + 1 << " state weights and targets, got " << Q.size() << " and "
       << theta.size();
    throw Error(ErrorKind::LengthMismatch, os.str());
  }
  for (int t = 0; t <= N; ++t) {
    if (Q[t].rows() != n || Q[t].cols() != n || theta[t].size() != n) {
      throw Error(ErrorKind::DimensionMismatch, "Q_" + std::to_string(t) + " / theta_" +
                                                    std::to_string(t) + " size");
    }
  }
  for (int t = 0; t < N; ++t) {
    if (R[t].rows() != m || R[t].cols() != m) {
      throw Error(ErrorKind::DimensionMismatch, "R_" + std::to_string(t) + " size");
    }
  }
  if (x0.size() != n) throw Error(ErrorKind::DimensionMismatch, "x0 size");
}

CostSequence QuadraticInstance::costs() const {
  validate();
  const int N = horizon();
  std::vector<StageCostPtr> f;
  std::vector<StageCostPtr> g;
  double mu_f = std::numeric_limits<double>::infinity();
  double l_f = 0.0;
  double l_g = 0.0;
  for (int t = 0; t <= N; ++t) {
    auto [lo, hi] = eig_range(Q[t]);
    mu_f = std::min(mu_f, lo);
    l_f = std::max(l_f, hi);
    f.push_back(std::make_shared<QuadraticCost>(Q[t], theta[t]));
  }
  for (int t = 0; t < N; ++t) {
    l_g = std::max(l_g, eig_range(R[t]).second);
    g.push_back(std::make_shared<QuadraticCost>(R[t]));
  }
  return CostSequence(std::move(f), std::move(g), mu_f, l_f, l_g);
}

Instance QuadraticInstance::to_instance() const { return Instance{system, costs(), x0}; }

double DpSolution::value(int t, const Vector& xt) const {
  const Vector d = xt - beta[t];
  return 0.5 * d.dot(P[t] * d) + offset[t];
}

DpSolution dp_solve(const QuadraticInstance& inst) {
  inst.validate();
  const int N = inst.horizon();
  const Matrix& A = inst.system.A;
  const Matrix& B = inst.system.B;

  DpSolution s;
  s.P.resize(N + 1);
  s.beta.resize(N + 1);
  s.alpha.resize(N + 1);
  s.offset.assign(N + 1, 0.0);
  s.M.resize(N);
  s.H.resize(N);
  s.K.resize(N);
  s.K_prime.resize(N);
  s.K_alpha.resize(N);

  s.P[N] = inst.Q[N];
  s.beta[N] = inst.theta[N];
  s.alpha[N] = inst.Q[N] * inst.theta[N];
  for (int t = N - 1; t >= 0; --t) {
    const Matrix& Pn = s.P[t + 1];
    const Matrix S = sym(inst.R[t] + B.transpose() * Pn * B);
    Eigen::LLT<Matrix> S_llt(S);
    if (S_llt.info() != Eigen::Success) {
      throw Error(ErrorKind::SingularInnerMatrix,
                  "R_t + B'P_{t+1}B not positive definite at t = " + std::to_string(t));
    }
    const Matrix gain = S_llt.solve(B.transpose() * Pn);  // S^{-1} B' P_{t+1}
    s.M[t] = sym(Pn - Pn * B * gain);
    s.P[t] = sym(inst.Q[t] + A.transpose() * s.M[t] * A);
    Eigen::LLT<Matrix> P_llt(s.P[t]);
    if (P_llt.info() != Eigen::Success) {
      throw Error(ErrorKind::SingularReducedHessian,
                  "Q_t + A'M_tA not positive definite at t = " + std::to_string(t));
    }
    const Vector Qtheta = inst.Q[t] * inst.theta[t];
    s.beta[t] = P_llt.solve(Qtheta + A.transpose() * s.M[t] * s.beta[t + 1]);
    s.H[t] = sym(s.M[t] - s.M[t] * A * P_llt.solve(A.transpose() * s.M[t]));
    s.K[t] = gain * A;
    s.K_prime[t] = gain;
    s.K_alpha[t] = S_llt.solve(B.transpose());
    s.alpha[t] = Qtheta + (A - B * s.K[t]).transpose() * s.alpha[t + 1];
    const Vector d = A * inst.theta[t] - s.beta[t + 1];
    s.offset[t] = s.offset[t + 1] + 0.5 * d.dot(s.H[t] * d);
  }

  s.x.resize(N + 1);
  s.u.resize(N);
  s.x[0] = inst.x0;
  s.J = 0.0;
  for (int t = 0; t < N; ++t) {
    s.u[t] = -s.K[t] * s.x[t] + s.K_prime[t] * s.beta[t + 1];
    const Vector dx = s.x[t] - inst.theta[t];
    s.J += 0.5 * dx.dot(inst.Q[t] * dx) + 0.5 * s.u[t].dot(inst.R[t] * s.u[t]);
    s.x[t + 1] = A * s.x[t] + B * s.u[t];
  }
  const Vector dx = s.x[N] - inst.theta[N];
  s.J += 0.5 * dx.dot(inst.Q[N] * dx);
  return s;
}

DareSolution solve_dare(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R) {
  LtiSystem{A, B}.validate();
  if (Q.rows() != A.rows() || Q.cols() != A.rows() || R.rows() != B.cols() ||
      R.cols() != B.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "Q must be n x n and R m x m");
  }
  auto sweep = [&](const Matrix& P) {
    const Matrix S = sym(R + B.transpose() * P * B);
    Eigen::LLT<Matrix> llt(S);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorKind::SingularInnerMatrix, "R + B'PB not positive definite");
    }
    return Matrix(sym(Q + A.transpose() * (P - P * B * llt.solve(B.transpose() * P)) * A));
  };

  DareSolution out;
  Matrix P = sym(Q);
  constexpr int kMaxSweeps = 100000;
  for (out.iterations = 1; out.iterations <= kMaxSweeps; ++out.iterations) {
    Matrix next = sweep(P);
    const double step = (next - P).norm();
    P = std::move(next);
    // scale-aware floor: P entries of size s carry rounding of order s * eps
    if (step <= 1e-12 * std::max(1.0, P.norm())) break;
  }
  out.residual = (sweep(P) - P).norm();
  if (!(out.residual <= 1e-9 * std::max(1.0, P.norm()))) {
    Error e(ErrorKind::NoConvergence,
            "Riccati residual " + std::to_string(out.residual) + " after value iteration");
    e.value = out.residual;
    throw e;
  }
  const Matrix S = sym(R + B.transpose() * P * B);
  out.K = S.llt().solve(B.transpose() * P * A);
  out.P = std::move(P);
  return out;
}

Matrix steady_state_lift(const CanonicalSystem& sys) {
  Matrix F1 = Matrix::Zero(sys.n(), sys.m());
  for (int i = 0; i < sys.m(); ++i) {
    F1.block(sys.block_start[i], i, sys.block_len[i], 1).setOnes();
  }
  return F1;
}

SteadyState steady_state(const CanonicalSystem& sys, const Matrix& Q, const Matrix& R,
                         const Vector& theta) {
  SteadyState ss;
  ss.F1 = steady_state_lift(sys);
  const Matrix G = Matrix::Identity(sys.m(), sys.m()) - sys.A_I() * ss.F1;
  const Matrix Hz = sym(ss.F1.transpose() * Q * ss.F1 + G.transpose() * R * G);
  Eigen::LLT<Matrix> llt(Hz);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::SteadyStateSolveFailed, "steady-state Hessian not positive definite");
  }
  ss.F2 = llt.solve(ss.F1.transpose() * Q);
  ss.z = ss.F2 * theta;
  ss.x = ss.F1 * ss.z;
  ss.u = G * ss.z;
  return ss;
}

Vector optimal_steady_z(const CanonicalSystem& sys, const StageCost& f, const StageCost& g,
                        double l_f, double l_g) {
  const Matrix F1 = steady_state_lift(sys);
  const Matrix G = Matrix::Identity(sys.m(), sys.m()) - sys.A_I() * F1;
  auto hf = f.hessian();
  auto hg = g.hessian();
  if (hf && hg) {
    const Matrix Hz = sym(F1.transpose() * (*hf) * F1 + G.transpose() * (*hg) * G);
    const Vector zero_x = Vector::Zero(sys.n());
    const Vector zero_u = Vector::Zero(sys.m());
    const Vector c = F1.transpose() * f.gradient(zero_x) + G.transpose() * g.gradient(zero_u);
    Eigen::LLT<Matrix> llt(Hz);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorKind::SteadyStateSolveFailed, "steady-state Hessian not positive definite");
    }
    return llt.solve(-c);
  }

  const double nf = spectral_norm(F1);
  const double ng = spectral_norm(G);
  const double step = 1.0 / (l_f * nf * nf + l_g * ng * ng);
  Vector z = Vector::Zero(sys.m());
  double residual = 0.0;
  for (int it = 0; it < 100000; ++it) {
    const Vector grad = F1.transpose() * f.gradient(F1 * z) + G.transpose() * g.gradient(G * z);
    residual = grad.norm();
    if (residual <= 1e-10) return z;
    z -= step * grad;
  }
  Error e(ErrorKind::SteadyStateSolveFailed,
          "steady-state descent stopped at gradient norm " + std::to_string(residual));
  e.value = residual;
  throw e;
}

double BiasFunction::value(const Vector& x) const {
  const Vector d = x - beta;
  return 0.5 * d.dot(P * d);
}

BiasFunction bias_function(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                           const Vector& theta) {
  const DareSolution dare = solve_dare(A, B, Q, R);
  const int n = static_cast<int>(A.rows());
  BiasFunction h;
  h.P = dare.P;
  h.K = dare.K;
  const Matrix S = sym(R + B.transpose() * h.P * B);
  h.M = sym(h.P - h.P * B * S.llt().solve(B.transpose() * h.P));
  const Matrix closed = A - B * h.K;
  h.alpha = (Matrix::Identity(n, n) - closed.transpose()).partialPivLu().solve(Q * theta);
  Eigen::LLT<Matrix> P_llt(h.P);
  h.beta = P_llt.solve(h.alpha);
  h.H = sym(h.M - h.M * A * P_llt.solve(A.transpose() * h.M));
  const Vector d = A * theta - h.beta;
  h.lambda = 0.5 * d.dot(h.H * d);
  return h;
}

PathLengths path_lengths(const QuadraticInstance& inst) {
  inst.validate();
  const int N = inst.horizon();
  const Matrix& A = inst.system.A;
  const Matrix& B = inst.system.B;
  PathLengths out;

  Vector prev_theta = Vector::Zero(inst.system.n());
  for (int t = 0; t <= N; ++t) {
    out.theta += (inst.theta[t] - prev_theta).norm();
    prev_theta = inst.theta[t];
  }

  std::vector<BiasFunction> h;
  std::vector<Vector> xe;
  for (int t = 0; t < N; ++t) {
    h.push_back(bias_function(A, B, inst.Q[t], inst.R[t], inst.theta[t]));
    xe.push_back(steady_state(inst.system, inst.Q[t], inst.R[t], inst.theta[t]).x);
  }
  for (int t = 1; t < N; ++t) {
    out.riccati += spectral_norm(h[t].P - h[t - 1].P);
    out.beta += (h[t].beta - h[t - 1].beta).norm();
  }
  out.riccati_terminal = spectral_norm(inst.Q[N] - h[N - 1].P);
  out.beta_terminal = (inst.theta[N] - h[N - 1].beta).norm();

  Vector prev = inst.x0;
  for (int t = 0; t <= N; ++t) {
    const Vector cur = (t < N) ? xe[t] : inst.theta[N];
    out.steady_state += (prev - cur).norm();
    prev = cur;
  }
  return out;
}

}  // namespace rhgc
