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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace rhgc {
namespace {

ExperimentConfig small_sweep() {
  return parse_config(R"({
    "N": 20,
    "W": {"from": 1, "to": 7},
    "seeds": {"from": 1, "count": 6},
    "algorithms": ["foss", "rhgd", "rhtm", "rhag", "submpc"]
  })",
                      ".");
}

ErrorKind config_error_kind(const std::string& text) {
  try {
    parse_config(text, ".");
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::DimensionMismatch;
}

TEST(Harness, UnknownKeysAreRejected) {
  EXPECT_EQ(config_error_kind(R"({"N": 20, "W": [1], "seeds": [1], "algorithms": ["rhgd"], "Nn": 3})"),
            ErrorKind::ConfigError);
  EXPECT_EQ(config_error_kind(
                R"({"N": 20, "W": [1], "seeds": [1], "algorithms": ["rhgd"], "costs": {"Qrange": [1, 2]}})"),
            ErrorKind::ConfigError);
}

TEST(Harness, EmptyWindowListIsRejected) {
  EXPECT_EQ(config_error_kind(R"({"N": 20, "W": [], "seeds": [1], "algorithms": ["rhgd"]})"),
            ErrorKind::ConfigError);
}

TEST(Harness, MissingMatrixFileIsRejected) {
  EXPECT_EQ(config_error_kind(R"({"N": 20, "W": [1], "seeds": [1], "algorithms": ["rhgd"],
                                 "system": {"source": "explicit", "A_file": "nope.txt", "B_file": "nope.txt"}})"),
            ErrorKind::ConfigError);
}

TEST(Harness, UnknownAlgorithmIsRejected) {
  EXPECT_EQ(config_error_kind(R"({"N": 20, "W": [1], "seeds": [1], "algorithms": ["mpc"]})"),
            ErrorKind::ConfigError);
}

TEST(Harness, MatrixRoundTrip) {
  Matrix M(2, 3);
  M << 1.0 / 3, -2, 1e-17, 5, 6.25, -7.125;
  std::ostringstream os;
  write_matrix(os, M);
  const std::string path = ::testing::TempDir() + "rhgc_matrix.txt";
  {
    std::ofstream f(path);
    f << os.str();
  }
  EXPECT_EQ(read_matrix(path), M);
}

TEST(Harness, RowsAreOrderedAndIndependentOfThreads) {
  const ExperimentConfig cfg = small_sweep();
  const auto a = run_experiment(cfg, 1);
  const auto b = run_experiment(cfg, 4);
  std::ostringstream sa, sb;
  write_sweep_csv(sa, a, false);
  write_sweep_csv(sb, b, false);
  EXPECT_EQ(sa.str(), sb.str());
  // foss once per seed, every other algorithm per (W, seed)
  EXPECT_EQ(a.size(), 6u + 4u * 7u * 6u);
  EXPECT_EQ(a.front().algorithm, "foss");
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i].algorithm == a[i - 1].algorithm) {
      EXPECT_TRUE(a[i - 1].W < a[i].W || (a[i - 1].W == a[i].W && a[i - 1].seed < a[i].seed));
    }
  }
  for (const SweepRow& r : a) {
    if (r.algorithm == "foss" || r.algorithm.rfind("submpc", 0) == 0) continue;
    EXPECT_EQ(r.K, (r.W - 1) / 2);
    EXPECT_NEAR(r.regret, r.J_online - r.J_star, 1e-9 * (1 + std::abs(r.J_star)));
  }
}

TEST(Harness, SummaryMeansAndShape) {
  const auto rows = run_experiment(small_sweep(), 2);
  const SweepSummary s = sweep_report(rows);
  std::map<std::pair<std::string, int>, std::pair<double, int>> acc;
  for (const SweepRow& r : rows) {
    auto& a = acc[{r.algorithm, r.W}];
    a.first += r.regret;
    a.second += 1;
  }
  ASSERT_EQ(s.cells.size(), acc.size());
  for (const auto& c : s.cells) {
    const auto& a = acc.at({c.algorithm, c.W});
    EXPECT_EQ(c.count, a.second);
    EXPECT_NEAR(c.mean_regret, a.first / a.second, 1e-12 * (1 + std::abs(c.mean_regret)));
  }
  for (const auto& [alg, ok] : s.piecewise_constant) {
    if (alg == "rhgd" || alg == "rhtm" || alg == "rhag") {
      EXPECT_TRUE(ok) << alg;
    }
  }
  for (const auto& [alg, slope] : s.log_slope) {
    if (alg == "rhgd" || alg == "rhtm") {
      EXPECT_LT(slope, 0.0) << alg;
    }
  }
}

TEST(Harness, EmptySeedsAreRejectedAtRunTime) {
  ExperimentConfig cfg = small_sweep();
  cfg.seeds.clear();
  EXPECT_THROW(run_experiment(cfg, 1), Error);
}

TEST(Harness, VerificationSuitePasses) {
  const auto results = verify_suite();
  EXPECT_EQ(results.size(), 8u);
  for (const auto& r : results) EXPECT_EQ(r.status, CheckResult::Status::Pass) << r.name << ": " << r.detail;
  EXPECT_TRUE(all_passed(results));
}

TEST(Harness, CorruptedStepIsCaught) {
  VerifyOptions bad;
  bad.gd_step_scale = 2.0;
  EXPECT_EQ(check_regret_bounds(bad).status, CheckResult::Status::Fail);
}

}  // namespace
}  // namespace rhgc
