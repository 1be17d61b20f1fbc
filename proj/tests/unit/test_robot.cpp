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
#include "rhgc/robot.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace rhgc {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Robot, StraightStep) {
  const Pose p = robot_step({1.0, 2.0, 0.0}, 3.0, 0.0, 0.5, 0.001);
  EXPECT_NEAR(p.x, 2.5, 1e-12);
  EXPECT_NEAR(p.y, 2.0, 1e-12);
  EXPECT_NEAR(p.heading, 0.0, 1e-15);
}

TEST(Robot, FullTurnClosesTheCircle) {
  const Pose p = robot_step({0.0, 0.0, 0.3}, 1.0, 2 * kPi, 1.0, 1e-4);
  EXPECT_LT(std::hypot(p.x, p.y), 1e-3);
  EXPECT_NEAR(wrap_angle(p.heading - 0.3), 0.0, 1e-9);
}

TEST(Robot, WrapAngle) {
  EXPECT_NEAR(wrap_angle(3 * kPi), kPi, 1e-12);
  EXPECT_NEAR(wrap_angle(-kPi), kPi, 1e-12);
  EXPECT_NEAR(wrap_angle(0.5), 0.5, 1e-15);
  EXPECT_NEAR(wrap_angle(-2 * kPi - 0.25), -0.25, 1e-12);
}

TEST(Robot, ControlsOfACorner) {
  const std::vector<Point> p{{0, 0}, {1, 0}, {1, 1}};
  const RobotControls c = controls_of_positions(p, 0.5, 0.0);
  EXPECT_NEAR(c.heading[0], 0.0, 1e-15);
  EXPECT_NEAR(c.heading[1], kPi / 2, 1e-15);
  EXPECT_NEAR(c.v[0], 2.0, 1e-15);
  EXPECT_NEAR(c.v[1], 2.0, 1e-15);
  EXPECT_NEAR(c.w[0], kPi, 1e-12);
  EXPECT_EQ(c.w[1], 0.0);
}

TEST(Robot, CostOfTheLineReference) {
  RobotConfig cfg;
  cfg.reference = "line";
  cfg.N = 50;
  const RobotProblem prob(cfg);
  // tracking is zero, w is zero, v is the line speed
  const double expect = cfg.N * cfg.velocity * cfg.dt * cfg.dt * cfg.line_speed * cfg.line_speed;
  EXPECT_NEAR(prob.cost(prob.reference()), expect, 1e-9 * expect);
}

TEST(Robot, CostOfTheCircleReference) {
  RobotConfig cfg;
  cfg.reference = "circle";
  cfg.N = 60;
  const RobotProblem prob(cfg);
  const double step = 2 * kPi / cfg.N;
  const double chord = 2 * cfg.circle_radius * std::sin(step / 2);
  const double expect = cfg.N * cfg.velocity * chord * chord +
                        (cfg.N - 1) * cfg.turn_rate * step * step;
  EXPECT_NEAR(prob.cost(prob.reference()), expect, 1e-9 * expect);
  const auto& r = prob.reference();
  EXPECT_LT((r.front() - r.back()).norm(), 1e-9);
}

TEST(Robot, GradientMatchesFiniteDifferences) {
  RobotConfig cfg;
  cfg.N = 40;
  const RobotProblem prob(cfg);
  std::vector<Point> p = prob.reference();
  Rng rng(3);
  for (int t = 1; t <= cfg.N; ++t) p[t] += 0.05 * Point(rng.normal(), rng.normal());
  const std::vector<Point> g = prob.gradient(p);
  const double h = 1e-6;
  for (int s = 1; s <= cfg.N; ++s) {
    for (int k = 0; k < 2; ++k) {
      std::vector<Point> a = p, b = p;
      a[s](k) += h;
      b[s](k) -= h;
      const double fd = (prob.cost(a) - prob.cost(b)) / (2 * h);
      EXPECT_NEAR(fd, g[s](k), 1e-4 * (1 + std::abs(fd))) << "s " << s << " k " << k;
    }
    std::vector<Point> window;
    for (int j = s - 2; j <= s + 2; ++j) window.push_back(j >= 0 && j <= cfg.N ? p[j] : Point::Zero());
    EXPECT_LT((prob.partial_gradient(s, window) - g[s]).norm(), 1e-10);
  }
}

TEST(Robot, TrackingOnlyReproducesTheReference) {
  RobotConfig cfg;
  cfg.velocity = 0.0;
  cfg.turn_rate = 0.0;
  const RobotRun run = robot_rhgc(cfg, "rhgd", 40);
  const auto ref = reference_path(cfg);
  double worst = 0.0;
  for (int t = 0; t <= cfg.N; ++t) worst = std::max(worst, (run.planned[t] - ref[t]).norm());
  EXPECT_LT(worst, 1e-6);
}

TEST(Robot, LineIsTrackedClosely) {
  RobotConfig cfg;
  cfg.reference = "line";
  cfg.N = 200;
  const RobotRun run = robot_rhgc(cfg, "rhgd", 20);
  const auto ref = reference_path(cfg);
  for (int t = 0; t <= cfg.N; ++t) {
    EXPECT_LT(std::hypot(run.executed[t].x - ref[t].x(), run.executed[t].y - ref[t].y()), 1e-2);
  }
}

TEST(Robot, HeartRunImprovesWithLookahead) {
  RobotConfig cfg;
  const RobotRun a = robot_rhgc(cfg, "rhgd", 3);
  const RobotRun b = robot_rhgc(cfg, "rhgd", 21);
  const RobotRun c = robot_rhgc(cfg, "rhgd", 80);
  EXPECT_GT(a.planned_cost, b.planned_cost);
  EXPECT_GT(b.planned_cost, c.planned_cost);
  EXPECT_EQ(c.K, 39);
  for (const RobotRun* r : {&a, &b, &c}) {
    for (double w : r->w) EXPECT_LE(std::abs(w), kPi / cfg.dt + 1e-9);
    EXPECT_EQ(static_cast<int>(r->executed.size()), cfg.N + 1);
    EXPECT_TRUE(std::isfinite(r->executed_cost));
  }
}

TEST(Robot, ShortWindowIsRejected) {
  try {
    robot_rhgc(RobotConfig{}, "rhgd", 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WindowTooShort);
  }
}

TEST(Robot, UnknownReferenceIsAConfigError) {
  RobotConfig cfg;
  cfg.reference = "spiral";
  try {
    reference_path(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
  }
}

}  // namespace
}  // namespace rhgc
