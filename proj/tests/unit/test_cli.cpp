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
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + RHGC_CLI + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rhgc_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

TEST(Cli, BadConfigExitsOne) {
  EXPECT_EQ(run(std::string("run --config ") + RHGC_TEST_DATA + "/bad_config.json --out " +
                scratch("bad.csv").string()),
            1);
  EXPECT_EQ(run("run --config /nonexistent/config.json"), 1);
}

TEST(Cli, VerifyPasses) { EXPECT_EQ(run("verify"), 0); }

TEST(Cli, CorruptedVerifyExitsTwo) { EXPECT_EQ(run("verify --gd-step-scale 2"), 2); }

TEST(Cli, SweepIsDeterministic) {
  const fs::path a = scratch("a.csv"), b = scratch("b.csv");
  const std::string cfg = std::string(RHGC_CONFIGS) + "/h1_sweep.json";
  ASSERT_EQ(run("sweep --config " + cfg + " --jobs 1 --out " + a.string()), 0);
  ASSERT_EQ(run("sweep --config " + cfg + " --jobs 3 --out " + b.string()), 0);
  const std::string sa = slurp(a);
  EXPECT_FALSE(sa.empty());
  EXPECT_EQ(sa, slurp(b));
  EXPECT_EQ(sa.substr(0, sa.find('\n')),
            "algorithm,W,K,seed,J_online,J_star,regret,bound_factor,gradient_evaluations");
  EXPECT_TRUE(fs::exists(scratch("a_summary.csv")));
}

TEST(Cli, SingleSeedRun) {
  const fs::path out = scratch("one.csv");
  ASSERT_EQ(run(std::string("run --config ") + RHGC_CONFIGS + "/h1_sweep.json --seed 3 --out " +
                out.string()),
            0);
  std::istringstream rows(slurp(out));
  std::string line;
  std::getline(rows, line);
  int n = 0;
  while (std::getline(rows, line)) {
    ++n;
    EXPECT_NE(line.find(",3,"), std::string::npos) << line;
  }
  EXPECT_GT(n, 0);
}

TEST(Cli, TransformReportsIndex) {
  const fs::path A = scratch("A.txt"), B = scratch("B.txt"), out = scratch("transform.txt");
  std::ofstream(A) << "0.5 1 0\n0 0.2 1\n0.3 0.1 0.4\n";
  std::ofstream(B) << "1\n0\n2\n";
  ASSERT_EQ(run("transform --A " + A.string() + " --B " + B.string() + " --out " + out.string()), 0);
  std::istringstream text(slurp(out));
  std::string line;
  bool saw_p = false;
  while (std::getline(text, line) && line != "A") saw_p = saw_p || line == "p 3";
  EXPECT_TRUE(saw_p);
  // the actuated row of a single-input canonical A holds the characteristic
  // polynomial: det(A) = 0.29, trace(A) = 1.1
  double a0 = 0, a1 = 0, a2 = 0;
  for (int r = 0; r < 3; ++r) std::getline(text, line);
  std::istringstream(line) >> a0 >> a1 >> a2;
  EXPECT_NEAR(a0, 0.29, 1e-12);
  EXPECT_NEAR(a2, 1.1, 1e-12);
}

TEST(Cli, UncontrollablePairIsAVerificationFailure) {
  const fs::path A = scratch("A2.txt"), B = scratch("B2.txt");
  std::ofstream(A) << "1 0\n0 2\n";
  std::ofstream(B) << "1\n0\n";
  EXPECT_EQ(run("transform --A " + A.string() + " --B " + B.string()), 2);
}

}  // namespace
