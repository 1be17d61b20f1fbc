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

#include "rhgc/algorithms.hpp"
#include "rhgc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rhgc {
namespace {

CanonicalSystem cyclic_system(int n) {
  Matrix A = Matrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = 1.0;
  A(n - 1, 0) += 1.0;
  Matrix B = Matrix::Zero(n, 1);
  B(n - 1, 0) = 1.0;
  return verify_canonical(A, B);
}

double family_delta(double zeta, int p) { return 4.0 / ((zeta - 1.0) * p); }

[[noreturn]] void inadmissible(const std::string& why) {
  throw Error(ErrorKind::InadmissibleParameters, why);
}

}  // namespace

double LowerBoundInstance::mu() const { return delta * p; }
double LowerBoundInstance::L() const { return delta * p + 4.0; }

LowerBoundInstance build_instance(double zeta, int p, int N, double L_N, double theta_bar,
                                  std::uint64_t seed) {
  if (!(zeta > 1.0)) inadmissible("zeta must exceed 1");
  if (p < 1) inadmissible("p must be at least 1");
  if (N < 2) inadmissible("N must be at least 2");
  if (!(theta_bar > 0.0)) inadmissible("theta_bar must be positive");
  if (!(4.0 * theta_bar <= L_N && L_N <= (2.0 * N + 1.0) * theta_bar)) {
    std::ostringstream os;
    os << "need 4 theta_bar <= L_N <= (2N + 1) theta_bar, got L_N = " << L_N
       << ", theta_bar = " << theta_bar << ", N = " << N;
    inadmissible(os.str());
  }

  LowerBoundInstance inst;
  inst.zeta = zeta;
  inst.p = p;
  inst.N = N;
  inst.L_N = L_N;
  inst.theta_bar = theta_bar;
  inst.seed = seed;

  const int n = p;
  inst.delta = family_delta(zeta, p);
  inst.sigma = theta_bar / std::sqrt(static_cast<double>(n));
  const int jumps = static_cast<int>(std::floor(L_N / (2.0 * theta_bar) + 1e-12));
  inst.epoch_length = (N - 1 + jumps - 1) / jumps;
  inst.epochs = (N - 1 + inst.epoch_length - 1) / inst.epoch_length;

  QuadraticInstance& q = inst.quad;
  q.system = cyclic_system(n);
  const Matrix Q = inst.delta * Matrix::Identity(n, n);
  const Matrix R = Matrix::Identity(1, 1);
  inst.P_e = solve_dare(q.system.A, q.system.B, Q, R).P;

  q.Q.assign(N, Q);
  q.Q.push_back(inst.P_e);
  q.R.assign(N, R);
  q.theta.assign(N + 1, Vector::Zero(n));
  q.x0 = Vector::Zero(n);

  Rng rng(seed);
  for (int e = 0; e < inst.epochs; ++e) {
    const int start = e * inst.epoch_length + 1;
    inst.epoch_starts.push_back(start);
    Vector target(n);
    for (int i = 0; i < n; ++i) target(i) = inst.sigma * rng.sign();
    for (int t = start; t < std::min(start + inst.epoch_length, N); ++t) q.theta[t] = target;
  }
  return inst;
}

bool window_admissible(int W, int N) { return W >= 1 && 3 * W <= N; }

Matrix assemble_h(double delta, int n, int N, const Matrix& P_e) {
  Matrix H = Matrix::Zero(N, N);
  for (int t = 1; t <= N; ++t) {
    const int f_terms = std::max(0, std::min(t + n - 1, N - 1) - t + 1);
    double d = delta * f_terms + 1.0;  // g_{t-1} through z_t
    if (t + n - 1 <= N - 1) d += 1.0;  // g_{t+n-1} through z_{t+n-n}
    H(t - 1, t - 1) = d;
    if (t + n <= N) {
      H(t - 1, t + n - 1) = -1.0;
      H(t + n - 1, t - 1) = -1.0;
    }
  }
  // terminal 0.5 x_N' P_e x_N, x_N = (z_{N-n+1}, ..., z_N)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int a = N - n + 1 + i;
      const int b = N - n + 1 + j;
      if (a >= 1 && b >= 1) H(a - 1, b - 1) += P_e(i, j);
    }
  }
  return H;
}

HSystem assemble_h_system(const LowerBoundInstance& inst) {
  const int n = inst.p;
  const int N = inst.N;
  const auto& theta = inst.quad.theta;
  HSystem out;
  out.H = assemble_h(inst.delta, n, N, inst.P_e);
  out.eta = Vector::Zero(N);
  for (int t = 1; t <= N; ++t) {
    double e = 0.0;
    for (int tau = t; tau <= std::min(t + n - 1, N - 1); ++tau) e += theta[tau](t - tau + n - 1);
    out.eta(t - 1) = inst.delta * e;
  }
  const Vector terminal = inst.P_e * theta[N];
  for (int i = 0; i < n; ++i) {
    const int a = N - n + 1 + i;
    if (a >= 1) out.eta(a - 1) += terminal(i);
  }
  return out;
}

PeCheck verify_pe_form(double zeta, int p) {
  if (!(zeta > 1.0) || p < 1) inadmissible("need zeta > 1 and p >= 1");
  const int n = p;
  const CanonicalSystem sys = cyclic_system(n);
  PeCheck c;
  c.delta = family_delta(zeta, p);
  const Matrix P =
      solve_dare(sys.A, sys.B, c.delta * Matrix::Identity(n, n), Matrix::Identity(1, 1)).P;
  c.q = P.diagonal();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) c.max_offdiag = std::max(c.max_offdiag, std::abs(P(i, j)));
    }
  }
  for (int i = 0; i + 1 < n; ++i) {
    c.max_spacing_error = std::max(c.max_spacing_error, std::abs(c.q(i + 1) - c.q(i) - c.delta));
  }
  const double nd = n * c.delta;
  c.qn_formula = 0.5 * (nd + std::sqrt(nd * nd + 4.0 * nd));
  constexpr double tol = 1e-8;
  c.diagonal = c.max_offdiag <= tol;
  c.spacing = c.max_spacing_error <= tol;
  c.q1_bracket = c.q(0) > c.delta && c.q(0) < c.delta + 1.0;
  c.qn_closed_form = std::abs(c.q(n - 1) - c.qn_formula) <= tol * (1.0 + c.qn_formula);
  return c;
}

YDecayCheck verify_y_decay(double zeta, int n, int N) {
  YDecayCheck c;
  if (!(zeta > 1.0) || n < 1 || N < 1) inadmissible("need zeta > 1, n >= 1, N >= 1");
  if (N % n != 0) {
    c.skipped = true;
    c.reason = "N = " + std::to_string(N) + " is not a multiple of n = " + std::to_string(n);
    return c;
  }
  const double delta = family_delta(zeta, n);
  const CanonicalSystem sys = cyclic_system(n);
  const Matrix P_e =
      solve_dare(sys.A, sys.B, delta * Matrix::Identity(n, n), Matrix::Identity(1, 1)).P;
  const Matrix H = assemble_h(delta, n, N, P_e);
  const Matrix Y = H.llt().solve(Matrix::Identity(N, N));

  const int blocks = N / n;
  Matrix y(blocks, blocks);
  for (int a = 0; a < blocks; ++a) {
    for (int b = 0; b < blocks; ++b) {
      y(a, b) = Y(a * n, b * n);
      for (int r = 0; r < n; ++r) {
        for (int s = 0; s < n; ++s) {
          const double want = (r == s) ? y(a, b) : 0.0;
          c.max_block_deviation =
              std::max(c.max_block_deviation, std::abs(Y(a * n + r, b * n + s) - want));
        }
      }
    }
  }
  c.min_entry = y.minCoeff();

  const double sq = std::sqrt(zeta);
  const double rho = (sq - 1.0) / (sq + 1.0);
  c.min_bound_ratio = std::numeric_limits<double>::infinity();
  for (int a = 0; a < blocks; ++a) {
    for (int b = a; b < blocks; ++b) {
      const double bound = (1.0 - rho) / (delta * n + 2.0) * std::pow(rho, b - a);
      c.min_bound_ratio = std::min(c.min_bound_ratio, y(a, b) / bound);
    }
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
  c.eig_min = es.eigenvalues()(0);
  c.eig_max = es.eigenvalues()(N - 1);

  c.block_structure = c.max_block_deviation <= 1e-10;
  c.positive = c.min_entry > 0.0;
  c.bound = c.min_bound_ratio >= 1.0 - 1e-12;
  c.spectrum = c.eig_min >= delta * n - 1e-9 && c.eig_max <= delta * n + 4.0 + 1e-9;
  return c;
}

LowerBoundEstimate empirical_lower_bound(const std::string& algorithm, double zeta, int p, int N,
                                         double L_N, double theta_bar,
                                         const std::vector<std::uint64_t>& seeds,
                                         const std::vector<int>& K_values) {
  if (seeds.empty()) inadmissible("need at least one seed");
  if (algorithm != "rhgd" && algorithm != "rhag" && algorithm != "rhtm") {
    inadmissible("unknown algorithm " + algorithm);
  }
  LowerBoundEstimate est;
  est.algorithm = algorithm;
  est.K = K_values;
  est.seeds = static_cast<int>(seeds.size());
  const double sq = std::sqrt(zeta);
  est.rho = (sq - 1.0) / (sq + 1.0);
  est.mean_regret.assign(K_values.size(), 0.0);

  const FossOracle foss;
  for (std::uint64_t seed : seeds) {
    const LowerBoundInstance lb = build_instance(zeta, p, N, L_N, theta_bar, seed);
    const Instance inst = lb.quad.to_instance();
    const double J_star = dp_solve(lb.quad).J;
    const double l = lb.L();
    const double z = lb.L() / lb.mu();
    const StepSizes steps = compute_stepsizes(l, z);
    est.mean_foss_regret += oracle_run(inst, foss).cost - J_star;
    for (size_t k = 0; k < K_values.size(); ++k) {
      const int W = K_values[k] * p + 1;
      OnlineRun run;
      if (algorithm == "rhgd") {
        run = rhgd_run(inst, W, foss, steps);
      } else if (algorithm == "rhag") {
        run = rhag_run(inst, W, foss, l, z);
      } else {
        run = rhtm_run(inst, W, foss, steps);
      }
      est.mean_regret[k] += run.cost - J_star;
    }
  }
  const double count = static_cast<double>(seeds.size());
  est.mean_foss_regret /= count;
  est.c1 = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < K_values.size(); ++k) {
    est.mean_regret[k] /= count;
    est.W.push_back(K_values[k] * p + 1);
    const double factor = (algorithm == "rhgd") ? gd_bound_factor(zeta, K_values[k])
                                                : tm_bound_factor(zeta, K_values[k]);
    est.upper_bound.push_back(factor * est.mean_foss_regret);
    est.lower_curve.push_back(std::pow(est.rho, 2 * K_values[k]) * L_N);
    est.c1 = std::min(est.c1, est.mean_regret[k] / est.lower_curve.back());
  }
  return est;
}

}  // namespace rhgc
