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

#include "rhgc/instances.hpp"
#include "rhgc/robot.hpp"
#include "rhgc/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rhgc {

struct SystemSpec {
  /// explicit, random or lower-bound.
  std::string source = "explicit";
  Matrix A;
  Matrix B;
  int n = 2;
  int m = 1;
};

struct LowerBoundSpec {
  double zeta = 5.0;
  int p = 2;
  double L_N = 8.0;
  double theta_bar = 1.0;
};

struct ExperimentConfig {
  int N = 30;
  std::vector<int> W;
  std::vector<std::uint64_t> seeds;
  /// foss, rhgd, rhag, rhtm, submpc.
  std::vector<std::string> algorithms;
  std::vector<int> submpc_iterations{1};
  bool record_wall_time = false;
  std::string output;

  SystemSpec system;
  RandomCostSpec costs;
  LowerBoundSpec lower_bound;

  RobotConfig robot;
  std::vector<int> robot_W{40, 80};
  std::string robot_algorithm = "rhgd";
};

/// Parses the JSON config format; unknown keys, wrong types and missing files
/// raise ConfigError. Relative file paths resolve against base_dir.
ExperimentConfig parse_config(const std::string& text, const std::string& base_dir);
ExperimentConfig load_config(const std::string& path);

/// Whitespace-separated rows of numbers.
Matrix read_matrix(const std::string& path);
void write_matrix(std::ostream& os, const Matrix& M);

struct SweepRow {
  std::string algorithm;
  int W = 0;
  int K = 0;
  std::uint64_t seed = 0;
  double J_online = 0.0;
  double J_star = 0.0;
  double regret = 0.0;
  double bound_factor = 0.0;
  long gradient_evaluations = 0;
  double wall_time = 0.0;
};

/// Rows in the order algorithm, W, seed. Seeds run in parallel on `jobs`
/// threads; the output does not depend on `jobs`.
std::vector<SweepRow> run_experiment(const ExperimentConfig& cfg, int jobs);

/// Comma separated, header row, 17 significant digits. wall_time only when asked.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool wall_time);

struct SweepSummary {
  struct Cell {
    std::string algorithm;
    int W = 0;
    int K = 0;
    double mean_regret = 0.0;
    int count = 0;
  };
  std::vector<Cell> cells;
  /// Least-squares slope of log mean regret against K, per algorithm.
  std::vector<std::pair<std::string, double>> log_slope;
  /// Per algorithm: every seed's regret is constant across W sharing a K (to 1e-9).
  std::vector<std::pair<std::string, bool>> piecewise_constant;
};
SweepSummary sweep_report(const std::vector<SweepRow>& rows);
void write_summary(std::ostream& os, const SweepSummary& summary);

struct CheckResult {
  enum class Status { Pass, Fail, Skip };
  std::string name;
  Status status = Status::Fail;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  /// Multiplies the gradient step of the checked descent runs. Anything but 1
  /// is a deliberate corruption used to confirm the checks can fail.
  double gd_step_scale = 1.0;
};

/// Individual checks bundled by verify_suite.
CheckResult check_regret_bounds(const VerifyOptions& options = {});
CheckResult check_online_batch_equivalence();
CheckResult check_hessian_spectrum();
CheckResult check_partial_gradient();
CheckResult check_offline_equivalence();
CheckResult check_pe_structure();
CheckResult check_y_decay();
CheckResult check_foss_constant_regret();

std::vector<CheckResult> verify_suite(const VerifyOptions& options = {});
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace rhgc
