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

#include "rhgc/lqt.hpp"

#include <cmath>
#include <sstream>

namespace rhgc {
namespace {

/// Iterates v_s(j) for s = 1..N and j = -1..K. An empty vector marks an
/// iterate that has not been produced yet.
class IterateTable {
 public:
  IterateTable(int N, int K) : N_(N), K_(K), data_(static_cast<size_t>(N) * (K + 2)) {}

  Vector& at(int s, int j) { return data_[index(s, j)]; }
  const Vector& at(int s, int j) const { return data_[index(s, j)]; }

 private:
  size_t index(int s, int j) const {
    return static_cast<size_t>(s - 1) * (K_ + 2) + static_cast<size_t>(j + 1);
  }
  int N_;
  int K_;
  std::vector<Vector> data_;
};

void check_finite(const Vector& v, int s, int j) {
  if (!v.allFinite()) {
    std::ostringstream os;
    os << "iterate for z_" << s << " at iteration " << j << " is not finite";
    throw Error(ErrorKind::NonFiniteIterate, os.str());
  }
}

ZPath with_stacked(const ZPath& shape, const Vector& v) {
  ZPath out = shape;
  out.set_stacked(v);
  return out;
}

}  // namespace

StepSizes compute_stepsizes(double l_c, double zeta) {
  if (!(l_c > 0.0)) throw Error(ErrorKind::NonPositiveConstant, "l_c must be positive");
  if (!(zeta >= 1.0)) {
    throw Error(ErrorKind::InvalidConditionNumber, "zeta must be at least 1, got " + std::to_string(zeta));
  }
  StepSizes s;
  s.phi = 1.0 - 1.0 / std::sqrt(zeta);
  const double phi2 = s.phi * s.phi;
  s.gamma_g = 1.0 / l_c;
  s.gamma_c = (1.0 + s.phi) / l_c;
  s.gamma_omega = phi2 / (2.0 - s.phi);
  s.gamma_y = phi2 / ((1.0 + s.phi) * (2.0 - s.phi));
  s.gamma_z = phi2 / (1.0 - phi2);
  return s;
}

Recursion gradient_recursion(const StepSizes& s) { return {s.gamma_g, 0.0, 0.0, 0.0}; }

Recursion triple_momentum_recursion(const StepSizes& s) {
  return {s.gamma_c, s.gamma_omega, s.gamma_y, s.gamma_z};
}

Recursion nesterov_recursion(double l_c, double zeta) {
  if (!(l_c > 0.0)) throw Error(ErrorKind::NonPositiveConstant, "l_c must be positive");
  if (!(zeta >= 1.0)) throw Error(ErrorKind::InvalidConditionNumber, "zeta must be at least 1");
  const double r = std::sqrt(zeta);
  const double beta = (r - 1.0) / (r + 1.0);
  return {1.0 / l_c, beta, beta, 0.0};
}

Vector FossOracle::initialize(int s, const OracleContext& ctx) const {
  return optimal_steady_z(ctx.system, ctx.costs.f(s - 1), ctx.costs.g(s - 1), ctx.l_f, ctx.l_g);
}

Vector ReplayOracle::initialize(int s, const OracleContext&) const { return path_[s]; }

int iterations_for_window(int W, int p) {
  if (W < 1) throw Error(ErrorKind::WindowTooShort, "W must be at least 1");
  return (W - 1) / p;
}

OnlineRun receding_horizon_run(const Instance& inst, int W, const InitOracle& oracle,
                               const Recursion& rec, const std::string& name) {
  const CanonicalSystem& sys = inst.system;
  const int N = inst.horizon();
  const int p = sys.p;
  const int m = sys.m();
  const int K = iterations_for_window(W, p);
  const Matrix AI = sys.A_I();
  const ZPath history(sys, N, inst.x0);

  IterateTable omega(N, K);
  IterateTable y(N, K);
  IterateTable z(N, K);
  LookaheadCosts costs(inst.costs);
  const OracleContext ctx{sys, costs, inst.costs.l_f(), inst.costs.l_g()};

  OnlineRun run;
  run.algorithm = name;
  run.W = W;
  run.K = K;
  run.x.assign(1, inst.x0);
  const Vector zero = Vector::Zero(m);

  auto y_entry = [&](int s, int j) -> const Vector& {
    if (s <= 0) return history[s];
    if (s > N) return zero;
    const Vector& v = y.at(s, j);
    if (v.size() == 0) {
      throw std::logic_error("iterate y_" + std::to_string(s) + "(" + std::to_string(j) +
                             ") used before it was computed");
    }
    return v;
  };

  for (int t = 1 - W; t <= N - 1; ++t) {
    costs.reveal_through(std::min(t + W - 1, N));

    const int s0 = t + W;
    if (s0 >= 1 && s0 <= N) {
      Vector v = oracle.initialize(s0, ctx);
      if (v.size() != m) throw Error(ErrorKind::DimensionMismatch, "oracle output size");
      check_finite(v, s0, 0);
      omega.at(s0, -1) = v;
      omega.at(s0, 0) = v;
      y.at(s0, 0) = v;
      z.at(s0, 0) = v;
    }

    std::vector<Vector> window(2 * p + 1);
    for (int j = 1; j <= K; ++j) {
      const int s = t + W - j * p;
      if (s > N || s < 1) continue;
      for (int k = 0; k <= 2 * p; ++k) window[k] = y_entry(s - p + k, j - 1);
      const Vector g = partial_gradient(sys, costs, s, window);
      run.gradient_evaluations += partial_gradient_cost(p);

      const Vector& w1 = omega.at(s, j - 1);
      const Vector& w2 = omega.at(s, j - 2);
      Vector w_next = (1.0 + rec.omega) * w1 - rec.omega * w2 - rec.c * g;
      check_finite(w_next, s, j);
      y.at(s, j) = (1.0 + rec.y) * w_next - rec.y * w1;
      z.at(s, j) = (1.0 + rec.z) * w_next - rec.z * w1;
      omega.at(s, j) = std::move(w_next);
    }
    run.max_stage_read.push_back(costs.max_accessed());

    if (t >= 0) {
      const Vector& x = run.x.back();
      run.u.push_back(z.at(t + 1, K) - AI * x);
      run.x.push_back(sys.A * x + sys.B * run.u.back());
    }
  }

  run.z_initial = history;
  run.z_final = history;
  for (int s = 1; s <= N; ++s) {
    run.z_initial[s] = z.at(s, 0);
    run.z_final[s] = z.at(s, K);
  }
  run.cost = 0.0;
  for (int t = 0; t < N; ++t) {
    run.cost += inst.costs.f(t).value(run.x[t]) + inst.costs.g(t).value(run.u[t]);
  }
  run.cost += inst.costs.f(N).value(run.x[N]);
  return run;
}

OnlineRun rhgd_run(const Instance& inst, int W, const InitOracle& oracle) {
  const Smoothness sm = smoothness_params(inst);
  return rhgd_run(inst, W, oracle, compute_stepsizes(sm.l_c, sm.zeta));
}

OnlineRun rhgd_run(const Instance& inst, int W, const InitOracle& oracle, const StepSizes& steps) {
  return receding_horizon_run(inst, W, oracle, gradient_recursion(steps), "rhgd");
}

OnlineRun rhtm_run(const Instance& inst, int W, const InitOracle& oracle) {
  const Smoothness sm = smoothness_params(inst);
  return rhtm_run(inst, W, oracle, compute_stepsizes(sm.l_c, sm.zeta));
}

OnlineRun rhtm_run(const Instance& inst, int W, const InitOracle& oracle, const StepSizes& steps) {
  return receding_horizon_run(inst, W, oracle, triple_momentum_recursion(steps), "rhtm");
}

OnlineRun rhag_run(const Instance& inst, int W, const InitOracle& oracle) {
  const Smoothness sm = smoothness_params(inst);
  return rhag_run(inst, W, oracle, sm.l_c, sm.zeta);
}

OnlineRun rhag_run(const Instance& inst, int W, const InitOracle& oracle, double l_c, double zeta) {
  return receding_horizon_run(inst, W, oracle, nesterov_recursion(l_c, zeta), "rhag");
}

OnlineRun oracle_run(const Instance& inst, const InitOracle& oracle) {
  return receding_horizon_run(inst, 1, oracle, Recursion{}, oracle.name());
}

ZPath batch_gradient_descent(const Instance& inst, const ZPath& z0, int iterations, double step) {
  ZPath z = z0;
  for (int it = 0; it < iterations; ++it) {
    z.set_stacked(z.stacked() - step * full_gradient(inst, z));
  }
  return z;
}

ZPath batch_recursion(const Instance& inst, const ZPath& z0, int iterations, const Recursion& rec) {
  Vector w_prev = z0.stacked();
  Vector w = w_prev;
  Vector y = w;
  Vector z = w;
  for (int it = 0; it < iterations; ++it) {
    const Vector g = full_gradient(inst, with_stacked(z0, y));
    const Vector w_next = (1.0 + rec.omega) * w - rec.omega * w_prev - rec.c * g;
    y = (1.0 + rec.y) * w_next - rec.y * w;
    z = (1.0 + rec.z) * w_next - rec.z * w;
    w_prev = std::move(w);
    w = w_next;
  }
  return with_stacked(z0, z);
}

double gd_bound_factor(double zeta, int K) { return zeta * std::pow((zeta - 1.0) / zeta, K); }

double tm_bound_factor(double zeta, int K) {
  const double r = std::sqrt(zeta);
  return zeta * zeta * std::pow((r - 1.0) / r, 2 * K);
}

RegretReport dynamic_regret(const OnlineRun& run, double J_star, double zeta) {
  RegretReport r;
  r.J_online = run.cost;
  r.J_star = J_star;
  r.regret = run.cost - J_star;
  if (r.regret < -1e-7) {
    std::ostringstream os;
    os << "online cost " << run.cost << " beats the offline optimum " << J_star;
    Error e(ErrorKind::NegativeRegretBeyondTolerance, os.str());
    e.value = r.regret;
    throw e;
  }
  r.bound_factor = (run.algorithm == "rhgd") ? gd_bound_factor(zeta, run.K)
                                             : tm_bound_factor(zeta, run.K);
  return r;
}

}  // namespace rhgc
