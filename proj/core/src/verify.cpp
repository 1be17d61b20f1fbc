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
#include "rhgc/harness.hpp"

#include "rhgc/adversary.hpp"
#include "rhgc/algorithms.hpp"
#include "rhgc/baselines.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

namespace rhgc {
namespace {

using Status = CheckResult::Status;

CheckResult timed(const std::string& name, const std::function<void(CheckResult&)>& body) {
  CheckResult r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.status = Status::Fail;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

/// The regret-bound instances: n in {2,3,4}, m in {1,2}, N = 40.
std::vector<QuadraticInstance> bound_instances() {
  std::vector<QuadraticInstance> out;
  for (int i = 0; i < 20; ++i) {
    out.push_back(random_general_instance(2 + i % 3, 1 + (i / 3) % 2, 40, 1000 + i));
  }
  return out;
}

/// Scalar integrator, unit weights. zeta is small here, so the bounds get
/// tight as K grows and a wrong step size shows up.
QuadraticInstance tight_scalar_instance() {
  const CanonicalSystem sys = verify_canonical(Matrix::Ones(1, 1), Matrix::Ones(1, 1));
  RandomCostSpec spec;
  spec.q_lo = spec.q_hi = 1.0;
  spec.r_lo = spec.r_hi = 1.0;
  return random_tracking_instance(sys, 60, spec, 77);
}

using LdVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using LdMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

/// Stage cost at y, in long double when the cost is quadratic. Canonical
/// coordinates can make Q large with a moderate value, and the cancellation
/// would otherwise swamp a finite difference of step 1e-6.
long double stage_value(const StageCost& c, const LdVector& y) {
  if (const auto* q = dynamic_cast<const QuadraticCost*>(&c)) {
    const LdVector d = y - q->theta().cast<long double>();
    return 0.5L * d.dot(q->Q().cast<long double>() * d);
  }
  return c.value(y.cast<double>());
}

/// Sum of the stage terms that depend on z_t: f_s for s in [t, t + p - 1] and
/// g_s for s in [t - 1, t + p - 1].
long double cost_around(const Instance& inst, const ZPath& z, int t) {
  const CanonicalSystem& sys = inst.system;
  const int N = inst.horizon();
  const LdMatrix A_I = sys.A_I().cast<long double>();
  // x_s holds entries of z, so it is exact in double
  auto x = [&](int s) { return LdVector(state_at(sys, z, s).cast<long double>()); };
  long double c = 0.0L;
  for (int s = t; s <= std::min(t + sys.p - 1, N); ++s) c += stage_value(inst.costs.f(s), x(s));
  for (int s = std::max(t - 1, 0); s <= std::min(t + sys.p - 1, N - 1); ++s) {
    const LdVector u = z[s + 1].cast<long double>() - A_I * x(s);
    c += stage_value(inst.costs.g(s), u);
  }
  return c;
}

double stacked_gap(const ZPath& a, const ZPath& b) {
  return (a.stacked() - b.stacked()).cwiseAbs().maxCoeff();
}

}  // namespace

CheckResult check_regret_bounds(const VerifyOptions& options) {
  return timed("regret-bounds", [&](CheckResult& r) {
    std::vector<std::pair<QuadraticInstance, int>> cases;
    for (auto& q : bound_instances()) cases.emplace_back(std::move(q), 13);
    cases.emplace_back(tight_scalar_instance(), 40);

    const FossOracle foss;
    double worst = -std::numeric_limits<double>::infinity();  // max of regret - bound
    int violations = 0;
    int runs = 0;
    for (const auto& [quad, W_max] : cases) {
      const Instance inst = quad.to_instance();
      const double J_star = offline_optimal(quad).J;
      const Smoothness s = smoothness_params(inst);
      const StepSizes steps = compute_stepsizes(s.l_c, s.zeta);
      StepSizes gd_steps = steps;
      gd_steps.gamma_g *= options.gd_step_scale;
      const double foss_regret = oracle_run(inst, foss).cost - J_star;
      for (int W = 1; W <= W_max; ++W) {
        const int K = iterations_for_window(W, inst.system.p);
        const double gd = rhgd_run(inst, W, foss, gd_steps).cost - J_star;
        const double tm = rhtm_run(inst, W, foss, steps).cost - J_star;
        const double gd_gap = gd - gd_bound_factor(s.zeta, K) * foss_regret;
        const double tm_gap = tm - tm_bound_factor(s.zeta, K) * foss_regret;
        worst = std::max({worst, gd_gap, tm_gap});
        violations += (gd_gap > 1e-9) + (tm_gap > 1e-9);
        runs += 2;
      }
    }
    r.status = violations == 0 ? Status::Pass : Status::Fail;
    r.detail = std::to_string(runs) + " runs, " + std::to_string(violations) +
               " violations, max(regret - bound) = " + fmt(worst);
  });
}

CheckResult check_online_batch_equivalence() {
  return timed("online-batch-equivalence", [](CheckResult& r) {
    const FossOracle foss;
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const QuadraticInstance quad = random_general_instance(2 + i % 3, 1 + (i / 2) % 2, 30, 2000 + i);
      const Instance inst = quad.to_instance();
      const Smoothness s = smoothness_params(inst);
      const StepSizes steps = compute_stepsizes(s.l_c, s.zeta);
      const int p = inst.system.p;
      for (int W : {p + 1, 2 * p + 1, 3 * p + 1}) {
        const OnlineRun gd = rhgd_run(inst, W, foss, steps);
        worst = std::max(worst, stacked_gap(gd.z_final, batch_gradient_descent(
                                                            inst, gd.z_initial, gd.K, steps.gamma_g)));
        const OnlineRun tm = rhtm_run(inst, W, foss, steps);
        worst = std::max(worst, stacked_gap(tm.z_final,
                                            batch_recursion(inst, tm.z_initial, tm.K,
                                                            triple_momentum_recursion(steps))));
        const OnlineRun ag = rhag_run(inst, W, foss, s.l_c, s.zeta);
        worst = std::max(worst, stacked_gap(ag.z_final,
                                            batch_recursion(inst, ag.z_initial, ag.K,
                                                            nesterov_recursion(s.l_c, s.zeta))));
      }
    }
    r.status = worst <= 1e-10 ? Status::Pass : Status::Fail;
    r.detail = "max coordinate error " + fmt(worst);
  });
}

CheckResult check_hessian_spectrum() {
  return timed("hessian-spectrum", [](CheckResult& r) {
    int bad = 0;
    double lo_ratio = std::numeric_limits<double>::infinity();
    double hi_ratio = 0.0;
    for (int i = 0; i < 10; ++i) {
      const Instance inst = random_general_instance(2 + i % 3, 1 + (i / 3) % 2, 20, 3000 + i).to_instance();
      const Smoothness s = smoothness_params(inst);
      const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(quadratic_form(inst).H).eigenvalues();
      const double mu_f = inst.costs.mu_f();
      bad += (ev.minCoeff() < mu_f - 1e-9) || (ev.maxCoeff() > s.l_c + 1e-9);
      lo_ratio = std::min(lo_ratio, ev.minCoeff() / mu_f);
      hi_ratio = std::max(hi_ratio, ev.maxCoeff() / s.l_c);
    }
    r.status = bad == 0 ? Status::Pass : Status::Fail;
    r.detail = std::to_string(bad) + " of 10 outside; min eig / mu_f >= " + fmt(lo_ratio) +
               ", max eig / l_c <= " + fmt(hi_ratio);
  });
}

CheckResult check_partial_gradient() {
  return timed("partial-gradient", [](CheckResult& r) {
    const double h = 1e-6;
    double worst = 0.0;
    int triples = 0;
    for (int i = 0; i < 20; ++i) {
      const QuadraticInstance quad = random_general_instance(2 + i % 3, 1 + (i / 3) % 2, 12, 4000 + i);
      Instance inst = quad.to_instance();
      if (i % 2 == 1) {
        // non-quadratic state costs
        std::vector<StageCostPtr> f;
        for (const auto& th : quad.theta) f.push_back(std::make_shared<LogCoshCost>(1.0, 0.5, th));
        inst.costs = CostSequence(f, inst.costs.g_all(), 1.0, 1.5, inst.costs.l_g());
      }
      const CanonicalSystem& sys = inst.system;
      const int N = inst.horizon();
      const int p = sys.p;
      Rng rng(5000 + i);
      for (int k = 0; k < 50; ++k, ++triples) {
        ZPath z(sys, N, inst.x0);
        for (int s = 1; s <= N; ++s) {
          for (int j = 0; j < sys.m(); ++j) z[s](j) = 3.0 * rng.normal();
        }
        const int t = 1 + static_cast<int>(rng.uniform01() * N) % N;
        std::vector<Vector> window;
        for (int s = t - p; s <= t + p; ++s) window.push_back(s <= N ? z[s] : Vector::Zero(sys.m()));
        const Vector g = partial_gradient(sys, inst.costs, t, window);
        Vector fd(sys.m());
        for (int j = 0; j < sys.m(); ++j) {
          ZPath zp = z;
          ZPath zm = z;
          zp[t](j) += h;
          zm[t](j) -= h;
          fd(j) = static_cast<double>((cost_around(inst, zp, t) - cost_around(inst, zm, t)) / (2.0L * h));
        }
        worst = std::max(worst, (fd - g).norm() / g.norm());
      }
    }
    r.status = worst <= 1e-5 ? Status::Pass : Status::Fail;
    r.detail = std::to_string(triples) + " triples, max relative error " + fmt(worst);
  });
}

CheckResult check_offline_equivalence() {
  return timed("offline-equivalence", [](CheckResult& r) {
    double worst = 0.0;
    for (const auto& quad : bound_instances()) {
      const Instance inst = quad.to_instance();
      const double J_dp = dp_solve(quad).J;
      const QuadraticForm qf = quadratic_form(inst);
      const Vector z = qf.H.llt().solve(-qf.c);
      const double J_direct = 0.5 * z.dot(qf.H * z) + qf.c.dot(z) + qf.d;
      worst = std::max(worst, std::abs(J_dp - J_direct) / std::abs(J_dp));
    }
    double worst_h = 0.0;
    for (const auto& [zeta, p] : std::vector<std::pair<double, int>>{{5.0, 2}, {2.0, 3}, {10.0, 1}}) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const LowerBoundInstance lb = build_instance(zeta, p, 30, 8.0, 1.0, seed);
        const Instance inst = lb.quad.to_instance();
        const double J_dp = dp_solve(lb.quad).J;
        const QuadraticForm qf = quadratic_form(inst);
        const Vector z = qf.H.llt().solve(-qf.c);
        const double J_direct = 0.5 * z.dot(qf.H * z) + qf.c.dot(z) + qf.d;
        const HSystem hs = assemble_h_system(lb);
        ZPath zh(inst.system, inst.horizon(), inst.x0);
        zh.set_stacked(hs.H.llt().solve(hs.eta));
        const double J_h = total_cost(inst, zh);
        worst_h = std::max({worst_h, std::abs(J_dp - J_direct) / std::abs(J_dp),
                            std::abs(J_dp - J_h) / std::abs(J_dp)});
      }
    }
    r.status = (worst <= 1e-8 && worst_h <= 1e-8) ? Status::Pass : Status::Fail;
    r.detail = "max relative gap " + fmt(worst) + " (random), " + fmt(worst_h) + " (lower-bound family)";
  });
}

CheckResult check_pe_structure() {
  return timed("terminal-riccati-structure", [](CheckResult& r) {
    int bad = 0;
    double spacing = 0.0;
    double offdiag = 0.0;
    for (double zeta : {2.0, 5.0, 10.0}) {
      for (int p = 1; p <= 4; ++p) {
        const PeCheck c = verify_pe_form(zeta, p);
        bad += !c.passed();
        spacing = std::max(spacing, c.max_spacing_error);
        offdiag = std::max(offdiag, c.max_offdiag);
      }
    }
    r.status = bad == 0 ? Status::Pass : Status::Fail;
    r.detail = std::to_string(bad) + " of 12 failed; max off-diagonal " + fmt(offdiag) +
               ", max spacing error " + fmt(spacing);
  });
}

CheckResult check_y_decay() {
  return timed("inverse-decay", [](CheckResult& r) {
    int bad = 0;
    double ratio = std::numeric_limits<double>::infinity();
    for (const auto& [n, N] : std::vector<std::pair<int, int>>{{1, 20}, {2, 40}, {3, 30}}) {
      for (double zeta : {2.0, 5.0}) {
        const YDecayCheck c = verify_y_decay(zeta, n, N);
        bad += !c.passed();
        ratio = std::min(ratio, c.min_bound_ratio);
      }
    }
    r.status = bad == 0 ? Status::Pass : Status::Fail;
    r.detail = std::to_string(bad) + " of 6 failed; min entry / bound " + fmt(ratio);
  });
}

CheckResult check_foss_constant_regret() {
  return timed("foss-constant-regret", [](CheckResult& r) {
    RandomCostSpec spec;
    spec.time_invariant = true;
    spec.terminal = "bias";
    std::vector<CanonicalSystem> systems{example_system()};
    Rng rng(6000);
    systems.push_back(to_canonical(random_controllable_system(3, 1, rng)));
    systems.push_back(to_canonical(random_controllable_system(4, 2, rng)));
    const FossOracle foss;
    double worst = 0.0;
    for (const auto& sys : systems) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        double regret[2];
        int k = 0;
        for (int N : {30, 300}) {
          const QuadraticInstance quad = random_tracking_instance(sys, N, spec, seed);
          regret[k++] = oracle_run(quad.to_instance(), foss).cost - dp_solve(quad).J;
        }
        worst = std::max(worst, std::abs(regret[1] - regret[0]) / (1.0 + regret[0]));
      }
    }
    r.status = worst <= 1e-6 ? Status::Pass : Status::Fail;
    r.detail = "max |R(300) - R(30)| / (1 + R(30)) = " + fmt(worst);
  });
}

std::vector<CheckResult> verify_suite(const VerifyOptions& options) {
  return {check_regret_bounds(options), check_online_batch_equivalence(),
          check_hessian_spectrum(),     check_partial_gradient(),
          check_offline_equivalence(),  check_pe_structure(),
          check_y_decay(),              check_foss_constant_regret()};
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.status == CheckResult::Status::Pass; });
}

}  // namespace rhgc
