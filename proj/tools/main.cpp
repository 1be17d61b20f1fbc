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
// rhgc command line: transform, run, sweep, lower-bound, robot, verify.
// Exit status 0 on success, 1 on a config or usage error, 2 when a check fails
// or a run aborts.

#include "rhgc/adversary.hpp"
#include "rhgc/canonical.hpp"
#include "rhgc/harness.hpp"
#include "rhgc/robot.hpp"

#include <CLI11.hpp>
#include <Eigen/SVD>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kFailed = 2;

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON experiment config");
  sub->add_option("--out", c.out, "output path");
  sub->add_option("--seed", c.seed, "run this seed only");
  sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
}

/// Output stream for `path`, or stdout if empty.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw rhgc::Error(rhgc::ErrorKind::ConfigError, "cannot write " + path);
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

rhgc::ExperimentConfig config_for(const Common& c) {
  if (c.config.empty()) throw rhgc::Error(rhgc::ErrorKind::ConfigError, "--config is required");
  rhgc::ExperimentConfig cfg = rhgc::load_config(c.config);
  if (c.seed) cfg.seeds = {*c.seed};
  return cfg;
}

int cmd_transform(const Common& c, const std::string& a_path, const std::string& b_path) {
  rhgc::LtiSystem sys;
  if (!a_path.empty() || !b_path.empty()) {
    if (a_path.empty() || b_path.empty()) {
      throw rhgc::Error(rhgc::ErrorKind::ConfigError, "give both --A and --B");
    }
    sys = {rhgc::read_matrix(a_path), rhgc::read_matrix(b_path)};
  } else {
    const rhgc::ExperimentConfig cfg = config_for(c);
    sys = {cfg.system.A, cfg.system.B};
  }
  const rhgc::CanonicalSystem cs = rhgc::to_canonical(sys);
  Sink sink(c.out);
  std::ostream& os = sink.os();
  os << "n " << cs.n() << "\nm " << cs.m() << "\np " << cs.p << "\nactuated";
  for (int r : cs.actuated) os << ' ' << r;
  os << "\nblock_lengths";
  for (int l : cs.block_len) os << ' ' << l;
  const Eigen::JacobiSVD<rhgc::Matrix> svd(cs.S_x);
  const auto& sv = svd.singularValues();
  os << "\ncond_S_x " << std::setprecision(6) << sv(0) / sv(sv.size() - 1) << '\n';
  for (const auto& [name, M] : {std::pair<const char*, const rhgc::Matrix*>{"A", &cs.A},
                                {"B", &cs.B}, {"S_x", &cs.S_x}, {"S_u", &cs.S_u}}) {
    os << '\n' << name << '\n';
    rhgc::write_matrix(os, *M);
  }
  return kOk;
}

int cmd_run(const Common& c, bool summary, const std::string& summary_path) {
  const rhgc::ExperimentConfig cfg = config_for(c);
  const std::string out = c.out.empty() ? cfg.output : c.out;
  const auto rows = rhgc::run_experiment(cfg, c.jobs);
  {
    Sink sink(out);
    rhgc::write_sweep_csv(sink.os(), rows, cfg.record_wall_time);
  }
  if (summary) {
    std::string path = summary_path;
    if (path.empty() && !out.empty()) {
      std::filesystem::path p(out);
      path = (p.parent_path() / (p.stem().string() + "_summary.csv")).string();
    }
    Sink sink(path);
    if (path.empty()) sink.os() << '\n';
    rhgc::write_summary(sink.os(), rhgc::sweep_report(rows));
  }
  return kOk;
}

struct LowerBoundArgs {
  double zeta = 5.0;
  int p = 2;
  int N = 30;
  double L_N = 8.0;
  double theta_bar = 1.0;
  int seeds = 50;
  int K_max = 5;
  std::vector<std::string> algorithms{"rhgd", "rhag", "rhtm"};
};

const char* status(bool ok) { return ok ? "PASS" : "FAIL"; }

int cmd_lower_bound(const Common& c, LowerBoundArgs a, const CLI::App& sub) {
  if (!c.config.empty()) {
    // flags given on the command line win over the config
    const rhgc::ExperimentConfig cfg = rhgc::load_config(c.config);
    if (sub.count("--zeta") == 0) a.zeta = cfg.lower_bound.zeta;
    if (sub.count("--p") == 0) a.p = cfg.lower_bound.p;
    if (sub.count("--L-N") == 0) a.L_N = cfg.lower_bound.L_N;
    if (sub.count("--theta-bar") == 0) a.theta_bar = cfg.lower_bound.theta_bar;
    if (sub.count("--N") == 0) a.N = cfg.N;
    if (sub.count("--seeds") == 0 && !cfg.seeds.empty()) a.seeds = static_cast<int>(cfg.seeds.size());
  }
  const std::uint64_t first = c.seed.value_or(1);
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < a.seeds; ++i) seeds.push_back(first + static_cast<std::uint64_t>(i));
  std::vector<int> Ks;
  for (int k = 0; k <= a.K_max; ++k) Ks.push_back(k);

  const rhgc::LowerBoundInstance lb =
      rhgc::build_instance(a.zeta, a.p, a.N, a.L_N, a.theta_bar, first);
  std::ostream& log = c.out.empty() ? std::cerr : std::cout;
  log << std::setprecision(10) << "instance zeta=" << a.zeta << " p=" << a.p << " N=" << a.N
      << " L_N=" << a.L_N << " theta_bar=" << a.theta_bar << " delta=" << lb.delta
      << " sigma=" << lb.sigma << " epoch_length=" << lb.epoch_length << " epochs=" << lb.epochs
      << " mu=" << lb.mu() << " L=" << lb.L() << '\n';

  bool ok = true;
  const rhgc::PeCheck pe = rhgc::verify_pe_form(a.zeta, a.p);
  ok = ok && pe.passed();
  log << status(pe.passed()) << " terminal-riccati-structure max_offdiag=" << pe.max_offdiag
      << " max_spacing_error=" << pe.max_spacing_error << '\n';
  const rhgc::YDecayCheck yd = rhgc::verify_y_decay(a.zeta, a.p, a.N);
  if (yd.skipped) {
    log << "SKIP inverse-decay " << yd.reason << '\n';
  } else {
    ok = ok && yd.passed();
    log << status(yd.passed()) << " inverse-decay min_bound_ratio=" << yd.min_bound_ratio
        << " eig=[" << yd.eig_min << ", " << yd.eig_max << "]\n";
  }
  for (int K : Ks) {
    if (!rhgc::window_admissible(K * a.p + 1, a.N)) {
      log << "note W=" << K * a.p + 1 << " exceeds N/3; outside the admissible window range\n";
    }
  }

  Sink sink(c.out);
  std::ostream& os = sink.os();
  os << std::setprecision(17)
     << "algorithm,K,W,mean_regret,upper_bound,lower_curve,c1,mean_foss_regret,seeds\n";
  for (const auto& alg : a.algorithms) {
    const rhgc::LowerBoundEstimate est =
        rhgc::empirical_lower_bound(alg, a.zeta, a.p, a.N, a.L_N, a.theta_bar, seeds, Ks);
    bool sandwich = est.c1 > 0.0;
    for (size_t k = 0; k < est.K.size(); ++k) {
      os << alg << ',' << est.K[k] << ',' << est.W[k] << ',' << est.mean_regret[k] << ','
         << est.upper_bound[k] << ',' << est.lower_curve[k] << ',' << est.c1 << ','
         << est.mean_foss_regret << ',' << est.seeds << '\n';
      sandwich = sandwich && est.mean_regret[k] <= est.upper_bound[k] + 1e-9;
    }
    ok = ok && sandwich;
    log << status(sandwich) << " sandwich " << alg << " c1=" << est.c1 << '\n';
  }
  return ok ? kOk : kFailed;
}

int cmd_robot(const Common& c) {
  rhgc::ExperimentConfig cfg;
  if (!c.config.empty()) cfg = rhgc::load_config(c.config);
  const std::string dir = c.out.empty() ? (cfg.output.empty() ? "." : cfg.output) : c.out;
  std::filesystem::create_directories(dir);
  const auto reference = rhgc::reference_path(cfg.robot);
  std::cout << "algorithm,W,K,planned_cost,executed_cost,gradient_evaluations,wall_time\n"
            << std::setprecision(10);
  for (int W : cfg.robot_W) {
    const rhgc::RobotRun run = rhgc::robot_rhgc(cfg.robot, cfg.robot_algorithm, W);
    const std::string stem = dir + "/robot_" + run.algorithm + "_W" + std::to_string(run.W);
    rhgc::write_robot_csv(stem + "_executed.csv", run, reference, true);
    rhgc::write_robot_csv(stem + "_planned.csv", run, reference, false);
    std::cout << run.algorithm << ',' << run.W << ',' << run.K << ',' << run.planned_cost << ','
              << run.executed_cost << ',' << run.gradient_evaluations << ',' << run.wall_time
              << '\n';
  }
  return kOk;
}

int cmd_verify(const Common& c, double gd_step_scale) {
  rhgc::VerifyOptions opt;
  opt.gd_step_scale = gd_step_scale;
  Sink sink(c.out);
  std::ostream& os = sink.os();
  double total = 0.0;
  const auto results = rhgc::verify_suite(opt);
  for (const auto& r : results) {
    const char* tag = r.status == rhgc::CheckResult::Status::Pass   ? "PASS"
                      : r.status == rhgc::CheckResult::Status::Skip ? "SKIP"
                                                                    : "FAIL";
    os << tag << ' ' << r.name << " (" << std::fixed << std::setprecision(2) << r.seconds
       << " s) " << r.detail << '\n';
    os.unsetf(std::ios::floatfield);
    total += r.seconds;
  }
  os << (rhgc::all_passed(results) ? "all checks passed" : "checks failed") << " in "
     << std::fixed << std::setprecision(2) << total << " s\n";
  return rhgc::all_passed(results) ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Receding-horizon gradient-based control: experiments and checks"};
  app.require_subcommand(1);
  Common common;

  auto* transform = app.add_subcommand("transform", "report the canonical form of (A, B)");
  add_common(transform, common);
  std::string a_path;
  std::string b_path;
  transform->add_option("--A", a_path, "matrix file for A");
  transform->add_option("--B", b_path, "matrix file for B");

  auto* run = app.add_subcommand("run", "run a config and write the per-run CSV");
  add_common(run, common);

  auto* sweep = app.add_subcommand("sweep", "run a config and write the CSV plus a summary");
  add_common(sweep, common);
  std::string summary_path;
  sweep->add_option("--summary", summary_path, "summary path (default: next to --out)");

  auto* lower = app.add_subcommand("lower-bound", "hard-instance checks and regret table");
  add_common(lower, common);
  LowerBoundArgs lb;
  lower->add_option("--zeta", lb.zeta);
  lower->add_option("--p", lb.p);
  lower->add_option("--N", lb.N);
  lower->add_option("--L-N", lb.L_N);
  lower->add_option("--theta-bar", lb.theta_bar);
  lower->add_option("--seeds", lb.seeds, "number of seeds, counting up from --seed (default 1)");
  lower->add_option("--K-max", lb.K_max);
  lower->add_option("--algorithm", lb.algorithms)->delimiter(',');

  auto* robot = app.add_subcommand("robot", "robot tracking demo; --out is a directory");
  add_common(robot, common);

  auto* verify = app.add_subcommand("verify", "run the invariant checks");
  add_common(verify, common);
  double gd_step_scale = 1.0;
  verify->add_option("--gd-step-scale", gd_step_scale,
                     "scale the descent step of the checked runs (anything but 1 should fail)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*transform) return cmd_transform(common, a_path, b_path);
    if (*run) return cmd_run(common, false, "");
    if (*sweep) return cmd_run(common, true, summary_path);
    if (*lower) return cmd_lower_bound(common, lb, *lower);
    if (*robot) return cmd_robot(common);
    if (*verify) return cmd_verify(common, gd_step_scale);
  } catch (const rhgc::Error& e) {
    std::cerr << "rhgc: " << e.what() << '\n';
    return e.kind() == rhgc::ErrorKind::ConfigError ? kConfigError : kFailed;
  } catch (const std::exception& e) {
    std::cerr << "rhgc: " << e.what() << '\n';
    return kFailed;
  }
  return kOk;
}
