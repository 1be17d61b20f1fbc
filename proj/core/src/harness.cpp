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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

namespace rhgc {
namespace {

/// Everything a sweep needs for one seed.
struct SeedProblem {
  Instance inst;
  double J_star = 0.0;
  double l_c = 0.0;
  double zeta = 0.0;
};

QuadraticInstance drawn_in_original_coordinates(const Matrix& A, const Matrix& B, int N,
                                                const RandomCostSpec& spec, std::uint64_t seed) {
  CanonicalSystem raw;
  raw.A = A;
  raw.B = B;
  const QuadraticInstance drawn = random_tracking_instance(raw, N, spec, seed);
  return canonical_quadratic_instance(LtiSystem{A, B}, drawn.Q, drawn.R, drawn.theta, drawn.x0);
}

SeedProblem build_problem(const ExperimentConfig& cfg, std::uint64_t seed) {
  SeedProblem sp;
  QuadraticInstance quad;
  if (cfg.system.source == "lower-bound") {
    const LowerBoundSpec& lb = cfg.lower_bound;
    const LowerBoundInstance fam = build_instance(lb.zeta, lb.p, cfg.N, lb.L_N, lb.theta_bar, seed);
    quad = fam.quad;
    sp.l_c = fam.L();
    sp.zeta = fam.L() / fam.mu();
  } else {
    if (cfg.system.source == "random") {
      // separate stream for the system so the costs match the explicit path
      Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
      const LtiSystem sys = random_controllable_system(cfg.system.n, cfg.system.m, rng);
      quad = drawn_in_original_coordinates(sys.A, sys.B, cfg.N, cfg.costs, seed);
    } else {
      quad = drawn_in_original_coordinates(cfg.system.A, cfg.system.B, cfg.N, cfg.costs, seed);
    }
  }
  sp.inst = quad.to_instance();
  if (sp.l_c == 0.0) {
    const Smoothness s = smoothness_params(sp.inst);
    sp.l_c = s.l_c;
    sp.zeta = s.zeta;
  }
  sp.J_star = offline_optimal(quad).J;
  return sp;
}

SweepRow make_row(const OnlineRun& run, int W, int K, std::uint64_t seed, double J_star,
                  double bound_factor, double seconds) {
  SweepRow row;
  row.algorithm = run.algorithm;
  row.W = W;
  row.K = K;
  row.seed = seed;
  row.J_online = run.cost;
  row.J_star = J_star;
  row.regret = run.cost - J_star;
  row.bound_factor = bound_factor;
  row.gradient_evaluations = run.gradient_evaluations;
  row.wall_time = seconds;
  return row;
}

std::vector<SweepRow> rows_for_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  const SeedProblem sp = build_problem(cfg, seed);
  const int p = sp.inst.system.p;
  const StepSizes steps = compute_stepsizes(sp.l_c, sp.zeta);
  const FossOracle foss;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<SweepRow> rows;

  for (const auto& alg : cfg.algorithms) {
    if (alg == "foss") {
      // W plays no role; reported once with W = 1, K = 0
      const auto t0 = clock::now();
      const OnlineRun run = oracle_run(sp.inst, foss);
      const double sec = std::chrono::duration<double>(clock::now() - t0).count();
      rows.push_back(make_row(run, 1, 0, seed, sp.J_star, 1.0, sec));
      continue;
    }
    for (int W : cfg.W) {
      const int K = iterations_for_window(W, p);
      if (alg == "submpc") {
        for (int it : cfg.submpc_iterations) {
          const auto t0 = clock::now();
          const OnlineRun run = submpc_run(sp.inst, W, it);
          const double sec = std::chrono::duration<double>(clock::now() - t0).count();
          rows.push_back(make_row(run, W, K, seed, sp.J_star, nan, sec));
        }
        continue;
      }
      const auto t0 = clock::now();
      OnlineRun run;
      double factor = nan;
      if (alg == "rhgd") {
        run = rhgd_run(sp.inst, W, foss, steps);
        factor = gd_bound_factor(sp.zeta, K);
      } else if (alg == "rhtm") {
        run = rhtm_run(sp.inst, W, foss, steps);
        factor = tm_bound_factor(sp.zeta, K);
      } else {
        run = rhag_run(sp.inst, W, foss, sp.l_c, sp.zeta);
      }
      const double sec = std::chrono::duration<double>(clock::now() - t0).count();
      rows.push_back(make_row(run, W, K, seed, sp.J_star, factor, sec));
    }
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> run_experiment(const ExperimentConfig& cfg, int jobs) {
  if (cfg.seeds.empty()) throw Error(ErrorKind::ConfigError, "no seeds given");
  if (cfg.algorithms.empty()) throw Error(ErrorKind::ConfigError, "no algorithms given");
  const bool needs_w = std::any_of(cfg.algorithms.begin(), cfg.algorithms.end(),
                                   [](const std::string& a) { return a != "foss"; });
  if (needs_w && cfg.W.empty()) throw Error(ErrorKind::ConfigError, "empty W list");
  const size_t count = cfg.seeds.size();
  std::vector<std::vector<SweepRow>> per_seed(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<size_t> next{0};

  auto worker = [&] {
    for (size_t i = next++; i < count; i = next++) {
      try {
        per_seed[i] = rows_for_seed(cfg, cfg.seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, static_cast<int>(count));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  // report the first failure in seed order, so errors are deterministic too
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<SweepRow> rows;
  for (auto& r : per_seed) rows.insert(rows.end(), r.begin(), r.end());
  // (algorithm, W, seed); algorithms keep their config order, seeds theirs
  std::vector<std::string> order;
  for (const auto& r : rows) {
    if (std::find(order.begin(), order.end(), r.algorithm) == order.end()) order.push_back(r.algorithm);
  }
  auto rank = [&](const SweepRow& r) {
    return std::find(order.begin(), order.end(), r.algorithm) - order.begin();
  };
  std::stable_sort(rows.begin(), rows.end(), [&](const SweepRow& a, const SweepRow& b) {
    const auto ra = rank(a);
    const auto rb = rank(b);
    return ra != rb ? ra < rb : a.W < b.W;
  });
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool wall_time) {
  const auto old = os.precision(17);
  os << "algorithm,W,K,seed,J_online,J_star,regret,bound_factor,gradient_evaluations";
  if (wall_time) os << ",wall_time";
  os << '\n';
  for (const auto& r : rows) {
    os << r.algorithm << ',' << r.W << ',' << r.K << ',' << r.seed << ',' << r.J_online << ','
       << r.J_star << ',' << r.regret << ',' << r.bound_factor << ',' << r.gradient_evaluations;
    if (wall_time) os << ',' << r.wall_time;
    os << '\n';
  }
  os.precision(old);
}

SweepSummary sweep_report(const std::vector<SweepRow>& rows) {
  SweepSummary out;
  std::vector<std::string> algs;
  for (const auto& r : rows) {
    if (std::find(algs.begin(), algs.end(), r.algorithm) == algs.end()) algs.push_back(r.algorithm);
  }
  for (const auto& alg : algs) {
    std::map<int, std::pair<int, std::vector<double>>> by_w;  // W -> (K, regrets)
    std::map<int, std::vector<double>> by_k;
    std::map<std::pair<std::uint64_t, int>, std::pair<double, double>> span;  // (seed, K) -> min, max
    for (const auto& r : rows) {
      if (r.algorithm != alg) continue;
      by_w[r.W].first = r.K;
      by_w[r.W].second.push_back(r.regret);
      by_k[r.K].push_back(r.regret);
      const auto key = std::make_pair(r.seed, r.K);
      auto it = span.find(key);
      if (it == span.end()) {
        span.emplace(key, std::make_pair(r.regret, r.regret));
      } else {
        it->second.first = std::min(it->second.first, r.regret);
        it->second.second = std::max(it->second.second, r.regret);
      }
    }
    for (const auto& [W, kr] : by_w) {
      SweepSummary::Cell c;
      c.algorithm = alg;
      c.W = W;
      c.K = kr.first;
      c.count = static_cast<int>(kr.second.size());
      for (double v : kr.second) c.mean_regret += v;
      c.mean_regret /= c.count;
      out.cells.push_back(c);
    }

    // least squares of log(mean regret) on K, over K with a positive mean
    std::vector<double> ks;
    std::vector<double> ls;
    for (const auto& [K, v] : by_k) {
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      if (mean > 0.0) {
        ks.push_back(K);
        ls.push_back(std::log(mean));
      }
    }
    double slope = std::numeric_limits<double>::quiet_NaN();
    if (ks.size() >= 2) {
      const double n = static_cast<double>(ks.size());
      double sk = 0, sl = 0, skk = 0, skl = 0;
      for (size_t i = 0; i < ks.size(); ++i) {
        sk += ks[i];
        sl += ls[i];
        skk += ks[i] * ks[i];
        skl += ks[i] * ls[i];
      }
      const double den = n * skk - sk * sk;
      if (den != 0.0) slope = (n * skl - sk * sl) / den;
    }
    out.log_slope.emplace_back(alg, slope);

    bool flat = true;
    for (const auto& [key, mm] : span) flat = flat && (mm.second - mm.first <= 1e-9);
    out.piecewise_constant.emplace_back(alg, flat);
  }
  return out;
}

void write_summary(std::ostream& os, const SweepSummary& summary) {
  const auto old = os.precision(17);
  os << "algorithm,W,K,mean_regret,count\n";
  for (const auto& c : summary.cells) {
    os << c.algorithm << ',' << c.W << ',' << c.K << ',' << c.mean_regret << ',' << c.count << '\n';
  }
  os << '\n' << "algorithm,log_regret_slope_per_K,piecewise_constant_in_W\n";
  for (size_t i = 0; i < summary.log_slope.size(); ++i) {
    os << summary.log_slope[i].first << ',' << summary.log_slope[i].second << ','
       << (summary.piecewise_constant[i].second ? "true" : "false") << '\n';
  }
  os.precision(old);
}

}  // namespace rhgc
