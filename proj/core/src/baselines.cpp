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
#include "rhgc/baselines.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace rhgc {
namespace {

void fill_trajectory(const Instance& inst, OfflineOptimum& out) {
  const int N = inst.horizon();
  out.x.clear();
  out.u.clear();
  for (int t = 0; t <= N; ++t) out.x.push_back(state_at(inst.system, out.z, t));
  for (int t = 0; t < N; ++t) out.u.push_back(control_at(inst.system, out.z, t));
}

ZPath stacked_solve(const Instance& inst) {
  const QuadraticForm qf = quadratic_form(inst);
  Eigen::LLT<Matrix> llt(qf.H);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularReducedHessian, "stacked Hessian of C(z) not positive definite");
  }
  ZPath z(inst.system, inst.horizon(), inst.x0);
  z.set_stacked(llt.solve(-qf.c));
  return z;
}

}  // namespace

OfflineOptimum offline_optimal(const Instance& inst) {
  OfflineOptimum out;
  out.cross_check_gap = std::numeric_limits<double>::quiet_NaN();
  if (inst.costs.is_quadratic()) {
    out.z = stacked_solve(inst);
    out.method = "stacked-solve";
  } else {
    const Smoothness sm = smoothness_params(inst);
    const Recursion rec = triple_momentum_recursion(compute_stepsizes(sm.l_c, sm.zeta));
    // Restarting in chunks keeps the gradient test cheap relative to the sweeps.
    ZPath z(inst.system, inst.horizon(), inst.x0);
    double residual = full_gradient(inst, z).norm();
    constexpr int kChunk = 200;
    for (int done = 0; residual > 1e-10; done += kChunk) {
      if (done >= 1000000) {
        Error e(ErrorKind::NoConvergence,
                "offline descent stopped at gradient norm " + std::to_string(residual));
        e.value = residual;
        throw e;
      }
      z = batch_recursion(inst, z, kChunk, rec);
      residual = full_gradient(inst, z).norm();
    }
    out.z = std::move(z);
    out.method = "batch-triple-momentum";
  }
  out.J = total_cost(inst, out.z);
  fill_trajectory(inst, out);
  return out;
}

OfflineOptimum offline_optimal(const QuadraticInstance& qi) {
  const DpSolution dp = dp_solve(qi);
  const Instance inst = qi.to_instance();
  OfflineOptimum out;
  out.method = "riccati";
  out.J = dp.J;
  out.x = dp.x;
  out.u = dp.u;
  out.z = z_of_states(qi.system, dp.x);
  const double J_check = total_cost(inst, stacked_solve(inst));
  out.cross_check_gap = std::abs(out.J - J_check) / (1.0 + std::abs(out.J));
  return out;
}

double submpc_smoothness(const CanonicalSystem& sys, int W, double l_f, double l_g) {
  const int n = sys.n();
  const int m = sys.m();
  Matrix G = Matrix::Zero(n * W, m * W);
  Matrix AkB = sys.B;
  for (int k = 0; k < W; ++k) {
    for (int j = 0; j + k < W; ++j) G.block((j + k) * n, j * m, n, m) = AkB;
    AkB = sys.A * AkB;
  }
  Eigen::JacobiSVD<Matrix> svd(G);
  const double g = svd.singularValues()(0);
  return l_f * g * g + l_g;
}

OnlineRun submpc_run(const Instance& inst, int W, int iterations) {
  if (W < 1) throw Error(ErrorKind::WindowTooShort, "W must be at least 1");
  if (iterations < 1) throw Error(ErrorKind::NonPositiveConstant, "iterations must be at least 1");
  const CanonicalSystem& sys = inst.system;
  const int N = inst.horizon();
  const int m = sys.m();
  LookaheadCosts costs(inst.costs);
  std::map<int, double> L_cache;

  OnlineRun run;
  run.algorithm = "submpc-" + std::to_string(iterations);
  run.W = W;
  run.K = iterations_for_window(W, sys.p);
  run.x.assign(1, inst.x0);

  std::vector<Vector> plan;  // warm start
  for (int t = 0; t < N; ++t) {
    costs.reveal_through(std::min(t + W - 1, N));
    const int Wt = std::min(W, N - t);
    const bool terminal = (t + W - 1 >= N);
    const Vector& xt = run.x.back();

    auto gradient = [&](const std::vector<Vector>& U) {
      std::vector<Vector> xs(Wt + 1);
      xs[0] = xt;
      for (int k = 0; k < Wt; ++k) xs[k + 1] = sys.A * xs[k] + sys.B * U[k];
      Vector lambda = terminal ? costs.f(N).gradient(xs[Wt]) : Vector::Zero(sys.n());
      std::vector<Vector> grad(Wt);
      for (int k = Wt - 1; k >= 0; --k) {
        grad[k] = costs.g(t + k).gradient(U[k]) + sys.B.transpose() * lambda;
        if (k > 0) lambda = costs.f(t + k).gradient(xs[k]) + sys.A.transpose() * lambda;
      }
      run.gradient_evaluations += 2L * Wt;
      return grad;
    };

    if (!L_cache.count(Wt)) {
      L_cache[Wt] = submpc_smoothness(sys, Wt, inst.costs.l_f(), inst.costs.l_g());
    }
    const double step = 1.0 / L_cache[Wt];

    // shift the previous plan by one stage, repeating its last control
    std::vector<Vector> U(Wt, Vector::Zero(m));
    for (int k = 0; k < Wt && !plan.empty(); ++k) {
      U[k] = plan[std::min<size_t>(k + 1, plan.size() - 1)];
    }

    std::vector<Vector> Y = U;
    double tk = 1.0;
    for (int it = 0; it < iterations; ++it) {
      const std::vector<Vector> g = gradient(Y);
      std::vector<Vector> U_next(Wt);
      for (int k = 0; k < Wt; ++k) U_next[k] = Y[k] - step * g[k];
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
      const double beta = (tk - 1.0) / t_next;
      for (int k = 0; k < Wt; ++k) Y[k] = U_next[k] + beta * (U_next[k] - U[k]);
      U = std::move(U_next);
      tk = t_next;
    }
    for (const auto& v : U) {
      if (!v.allFinite()) throw Error(ErrorKind::NonFiniteIterate, "subMPC control is not finite");
    }

    run.u.push_back(U[0]);
    run.x.push_back(sys.A * xt + sys.B * U[0]);
    run.max_stage_read.push_back(costs.max_accessed());
    plan = std::move(U);
  }

  run.cost = 0.0;
  for (int t = 0; t < N; ++t) {
    run.cost += inst.costs.f(t).value(run.x[t]) + inst.costs.g(t).value(run.u[t]);
  }
  run.cost += inst.costs.f(N).value(run.x[N]);
  return run;
}

}  // namespace rhgc
