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

#include "rhgc/types.hpp"

#include <string>
#include <vector>

namespace rhgc {

using Point = Eigen::Vector2d;

struct RobotConfig {
  int N = 800;
  double dt = 0.025;
  double sim_dt = 0.001;
  /// heart, line or circle.
  std::string reference = "heart";
  /// Radians of curve parameter per second. Zero means one full traversal over
  /// the horizon, i.e. 2 pi / (N dt).
  double time_scale = 0.0;
  /// Speed of the line reference.
  double line_speed = 4.0;
  double circle_radius = 10.0;
  /// Position, velocity and turn-rate weights: c_t = tracking (0 at t = 0),
  /// c^v_t = velocity dt^2 and c^w_t = turn_rate dt^2 (0 at t = N).
  double tracking = 1.0;
  double velocity = 15.0;
  double turn_rate = 15.0;
  /// extrapolate (z_s(0) = 2 r_{s-1} - r_{s-2}, constant-velocity motion),
  /// steady-state (z_s(0) = r_{s-1}) or hold (z_s(0) = latest plan for s - 1).
  std::string init = "extrapolate";
  double safety_factor = 2.0;
  int power_iterations = 60;
};

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
};

/// Advances x += cos(heading) v, y += sin(heading) v, heading += w over dt in
/// substeps of sim_dt.
Pose robot_step(const Pose& pose, double v, double w, double dt, double sim_dt);

/// Wraps to (-pi, pi].
double wrap_angle(double a);

/// r_0..r_N.
std::vector<Point> reference_path(const RobotConfig& cfg);
double resolved_time_scale(const RobotConfig& cfg);

/// Headings, speeds and turn rates implied by positions p_0..p_N. A zero-length
/// segment keeps the previous heading (initial_heading for the first) and gets v = 0.
/// w_{N-1} is zero since there is no heading past the horizon.
struct RobotControls {
  std::vector<double> heading;  // 0..N-1
  std::vector<double> v;        // 0..N-1
  std::vector<double> w;        // 0..N-1
};
RobotControls controls_of_positions(const std::vector<Point>& p, double dt, double initial_heading);

/// Tracking cost written over positions p_1..p_N with p_0 fixed.
class RobotProblem {
 public:
  explicit RobotProblem(RobotConfig cfg);

  const RobotConfig& config() const { return cfg_; }
  int horizon() const { return cfg_.N; }
  const std::vector<Point>& reference() const { return ref_; }
  double initial_heading() const { return heading0_; }

  double cost(const std::vector<Point>& p) const;
  /// dC/dp_s from p_{s-2..s+2}; window[k] holds p_{s-2+k}, entries past N ignored.
  Point partial_gradient(int s, const std::vector<Point>& window) const;
  /// Gradient over p_1..p_N (entry 0 unused).
  std::vector<Point> gradient(const std::vector<Point>& p) const;

  /// Cost of an executed run: poses at the stage times and the applied controls.
  double executed_cost(const std::vector<Pose>& poses, const std::vector<double>& v,
                       const std::vector<double>& w) const;

  /// safety_factor x largest Hessian eigenvalue on p_0..p_M (M = min(N, stages)), by power
  /// iteration on finite-difference Hessian-vector products at `at`.
  double lipschitz_estimate(const std::vector<Point>& at, int stages) const;

 private:
  double c(int t) const;
  double cv(int t) const;
  double cw(int t) const;

  RobotConfig cfg_;
  std::vector<Point> ref_;
  double heading0_ = 0.0;
};

struct RobotRun {
  std::string algorithm;
  int W = 0;
  int K = 0;
  double step = 0.0;
  double dt = 0.0;
  double initial_heading = 0.0;
  std::vector<Point> planned;  // p_0..p_N
  std::vector<Pose> executed;  // poses at t = 0..N
  std::vector<double> v;       // applied, 0..N-1
  std::vector<double> w;
  double planned_cost = 0.0;
  double executed_cost = 0.0;
  long gradient_evaluations = 0;
  double wall_time = 0.0;
};

/// Receding-horizon tracking with rhgd, rhag or rhtm on the position-space cost.
/// W >= 3 (WindowTooShort otherwise); W is clamped to N.
RobotRun robot_rhgc(const RobotConfig& cfg, const std::string& algorithm, int W);

/// Columns t, x, y, x_ref, y_ref, v, w. `executed` selects the executed poses
/// instead of the plan.
void write_robot_csv(const std::string& path, const RobotRun& run,
                     const std::vector<Point>& reference, bool executed);

}  // namespace rhgc
