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

#include "rhgc/algorithms.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>

namespace rhgc {
namespace {

constexpr double kPi = std::numbers::pi;

double heading_of(const Point& d, double fallback) {
  if (d.squaredNorm() == 0.0) return fallback;
  return std::atan2(d.y(), d.x());
}

/// d heading / d (segment end); the start gets the negative.
Point heading_jacobian(const Point& d) {
  const double r2 = d.squaredNorm();
  if (r2 == 0.0) return Point::Zero();
  return Point(-d.y(), d.x()) / r2;
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

}  // namespace

double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

Pose robot_step(const Pose& pose, double v, double w, double dt, double sim_dt) {
  const int steps = std::max(1, static_cast<int>(std::lround(dt / sim_dt)));
  const double h = dt / steps;
  Pose p = pose;
  for (int i = 0; i < steps; ++i) {
    p.x += h * std::cos(p.heading) * v;
    p.y += h * std::sin(p.heading) * v;
    p.heading += h * w;
  }
  return p;
}

double resolved_time_scale(const RobotConfig& cfg) {
  return cfg.time_scale > 0.0 ? cfg.time_scale : 2.0 * kPi / (cfg.N * cfg.dt);
}

std::vector<Point> reference_path(const RobotConfig& cfg) {
  if (cfg.N < 2 || !(cfg.dt > 0.0) || !(cfg.sim_dt > 0.0)) {
    throw Error(ErrorKind::ConfigError, "robot needs N >= 2 and positive time steps");
  }
  const double scale = resolved_time_scale(cfg);
  std::vector<Point> r(cfg.N + 1);
  for (int t = 0; t <= cfg.N; ++t) {
    const double tau = t * cfg.dt;
    if (cfg.reference == "heart") {
      const double s = scale * tau + 6.0;
      const double sn = std::sin(s - 6.0);
      r[t] = Point(16.0 * sn * sn * sn, 13.0 * std::cos(s) - 5.0 * std::cos(2.0 * s - 12.0) -
                                            2.0 * std::cos(3.0 * s - 18.0) -
                                            std::cos(4.0 * s - 24.0));
    } else if (cfg.reference == "line") {
      r[t] = Point(cfg.line_speed * tau, 0.0);
    } else if (cfg.reference == "circle") {
      r[t] = Point(cfg.circle_radius * std::cos(scale * tau), cfg.circle_radius * std::sin(scale * tau));
    } else {
      throw Error(ErrorKind::ConfigError, "unknown reference " + cfg.reference);
    }
  }
  return r;
}

RobotControls controls_of_positions(const std::vector<Point>& p, double dt, double initial_heading) {
  const int N = static_cast<int>(p.size()) - 1;
  RobotControls c;
  c.heading.resize(N);
  c.v.resize(N);
  c.w.assign(N, 0.0);
  double prev = initial_heading;
  for (int t = 0; t < N; ++t) {
    const Point d = p[t + 1] - p[t];
    c.heading[t] = heading_of(d, prev);
    c.v[t] = d.norm() / dt;
    prev = c.heading[t];
  }
  for (int t = 0; t + 1 < N; ++t) c.w[t] = wrap_angle(c.heading[t + 1] - c.heading[t]) / dt;
  return c;
}

RobotProblem::RobotProblem(RobotConfig cfg) : cfg_(std::move(cfg)), ref_(reference_path(cfg_)) {
  heading0_ = heading_of(ref_[1] - ref_[0], 0.0);
}

double RobotProblem::c(int t) const { return t == 0 ? 0.0 : cfg_.tracking; }
double RobotProblem::cv(int t) const { return t >= cfg_.N ? 0.0 : cfg_.velocity * cfg_.dt * cfg_.dt; }
double RobotProblem::cw(int t) const { return t >= cfg_.N ? 0.0 : cfg_.turn_rate * cfg_.dt * cfg_.dt; }

double RobotProblem::cost(const std::vector<Point>& p) const {
  const int N = cfg_.N;
  if (static_cast<int>(p.size()) != N + 1) throw Error(ErrorKind::LengthMismatch, "need p_0..p_N");
  const RobotControls u = controls_of_positions(p, cfg_.dt, heading0_);
  double J = 0.0;
  for (int t = 0; t <= N; ++t) J += c(t) * (p[t] - ref_[t]).squaredNorm();
  for (int t = 0; t < N; ++t) J += cv(t) * u.v[t] * u.v[t] + cw(t) * u.w[t] * u.w[t];
  return J;
}

Point RobotProblem::partial_gradient(int s, const std::vector<Point>& window) const {
  const int N = cfg_.N;
  if (s < 1 || s > N) {
    Error e(ErrorKind::StageOutOfRange, "robot stage " + std::to_string(s));
    e.value = s;
    throw e;
  }
  if (window.size() != 5) throw Error(ErrorKind::LengthMismatch, "robot window holds p_{s-2..s+2}");
  auto P = [&](int k) -> const Point& { return window[k - s + 2]; };
  const double kv = cfg_.velocity;   // c^v_t v_t^2 = kv |d|^2
  const double kw = cfg_.turn_rate;  // c^w_t w_t^2 = kw wrap(dheading)^2

  Point g = 2.0 * c(s) * (P(s) - ref_[s]);
  g += 2.0 * kv * (P(s) - P(s - 1));
  if (s <= N - 1) g -= 2.0 * kv * (P(s + 1) - P(s));

  // headings of segments s-2 .. s+1 that exist
  auto seg_ok = [&](int k) { return k >= 0 && k <= N - 1; };
  double heading[4];
  Point jac[4];
  double prev = heading0_;
  for (int i = 0; i < 4; ++i) {
    const int k = s - 2 + i;
    if (!seg_ok(k)) {
      heading[i] = prev;
      jac[i] = Point::Zero();
      continue;
    }
    const Point d = P(k + 1) - P(k);
    heading[i] = heading_of(d, prev);
    jac[i] = heading_jacobian(d);
    prev = heading[i];
  }
  // d heading_k / d p_s
  auto dh = [&](int k) -> Point {
    const int i = k - (s - 2);
    if (k == s - 1) return jac[i];   // p_s ends segment s-1
    if (k == s) return -jac[i];      // p_s starts segment s
    return Point::Zero();
  };
  for (int t = s - 2; t <= s; ++t) {
    if (t < 0 || t > N - 2) continue;
    const int i = t - (s - 2);
    const double dw = wrap_angle(heading[i + 1] - heading[i]);
    g += 2.0 * kw * dw * (dh(t + 1) - dh(t));
  }
  return g;
}

std::vector<Point> RobotProblem::gradient(const std::vector<Point>& p) const {
  const int N = cfg_.N;
  const double kv = cfg_.velocity;
  const double kw = cfg_.turn_rate;
  std::vector<Point> g(N + 1, Point::Zero());
  for (int t = 1; t <= N; ++t) g[t] += 2.0 * c(t) * (p[t] - ref_[t]);
  std::vector<double> heading(N);
  std::vector<Point> jac(N);
  double prev = heading0_;
  for (int k = 0; k < N; ++k) {
    const Point d = p[k + 1] - p[k];
    g[k + 1] += 2.0 * kv * d;
    g[k] -= 2.0 * kv * d;
    heading[k] = heading_of(d, prev);
    jac[k] = heading_jacobian(d);
    prev = heading[k];
  }
  for (int t = 0; t + 1 < N; ++t) {
    const double coef = 2.0 * kw * wrap_angle(heading[t + 1] - heading[t]);
    g[t + 2] += coef * jac[t + 1];
    g[t + 1] -= coef * jac[t + 1];
    g[t + 1] -= coef * jac[t];
    g[t] += coef * jac[t];
  }
  g[0].setZero();
  return g;
}

double RobotProblem::executed_cost(const std::vector<Pose>& poses, const std::vector<double>& v,
                                   const std::vector<double>& w) const {
  const int N = cfg_.N;
  double J = 0.0;
  for (int t = 0; t <= N; ++t) {
    J += c(t) * (Point(poses[t].x, poses[t].y) - ref_[t]).squaredNorm();
  }
  for (int t = 0; t < N; ++t) J += cv(t) * v[t] * v[t] + cw(t) * w[t] * w[t];
  return J;
}

double RobotProblem::lipschitz_estimate(const std::vector<Point>& at, int stages) const {
  const int M = std::max(1, std::min(cfg_.N, stages));
  double scale = 1.0;
  for (const auto& q : at) scale = std::max(scale, q.cwiseAbs().maxCoeff());
  const double eps = 1e-6 * scale;

  Rng rng(0x5eed);
  std::vector<Point> v(M + 1, Point::Zero());
  for (int k = 1; k <= M; ++k) v[k] = Point(rng.normal(), rng.normal());
  auto norm = [&](const std::vector<Point>& a) {
    double s = 0.0;
    for (int k = 1; k <= M; ++k) s += a[k].squaredNorm();
    return std::sqrt(s);
  };
  auto hvp = [&](const std::vector<Point>& dir) {
    std::vector<Point> plus = at;
    std::vector<Point> minus = at;
    for (int k = 1; k <= M; ++k) {
      plus[k] += eps * dir[k];
      minus[k] -= eps * dir[k];
    }
    const auto gp = gradient(plus);
    const auto gm = gradient(minus);
    std::vector<Point> out(M + 1, Point::Zero());
    for (int k = 1; k <= M; ++k) out[k] = (gp[k] - gm[k]) / (2.0 * eps);
    return out;
  };

  double lambda = 0.0;
  double nv = norm(v);
  for (int it = 0; it < cfg_.power_iterations; ++it) {
    for (int k = 1; k <= M; ++k) v[k] /= nv;
    const auto Hv = hvp(v);
    lambda = norm(Hv);
    nv = lambda;
    if (nv == 0.0) break;
    v = Hv;
  }
  return cfg_.safety_factor * lambda;
}

RobotRun robot_rhgc(const RobotConfig& cfg, const std::string& algorithm, int W) {
  const auto start = std::chrono::steady_clock::now();
  // the cost couples p_t with two later positions, so K >= 1 needs W >= 3
  if (W < 3) throw Error(ErrorKind::WindowTooShort, "robot W must be at least 3");
  if (cfg.init != "extrapolate" && cfg.init != "steady-state" && cfg.init != "hold") {
    throw Error(ErrorKind::ConfigError, "robot init must be extrapolate, steady-state or hold");
  }
  const RobotProblem prob(cfg);
  const int N = cfg.N;
  W = std::min(W, N);
  constexpr int p = 2;  // the cost couples p_t with p_{t+1} and p_{t+2}
  const int K = (W - 1) / p;
  const auto& ref = prob.reference();

  RobotRun run;
  run.algorithm = algorithm;
  run.W = W;
  run.K = K;
  run.dt = cfg.dt;
  run.initial_heading = prob.initial_heading();

  // z_s(0) from the reference up to r_{s-1}; the robot starts with the
  // reference's initial velocity, so r_{-1} = 2 r_0 - r_1.
  auto ref_init = [&](int s) -> Point {
    if (cfg.init == "steady-state") return ref[s - 1];
    const Point before = s >= 2 ? ref[s - 2] : Point(2.0 * ref[0] - ref[1]);
    return 2.0 * ref[s - 1] - before;
  };
  std::vector<Point> init_path(N + 1, ref[0]);
  if (cfg.init != "hold") {
    for (int s = 1; s <= N; ++s) init_path[s] = ref_init(s);
  }
  const double L = prob.lipschitz_estimate(init_path, N);
  const double mu = 2.0 * cfg.tracking;
  const double zeta = std::max(1.0, L / mu);
  const StepSizes steps = compute_stepsizes(L, zeta);
  run.step = steps.gamma_g;
  Recursion rec;
  if (algorithm == "rhgd") {
    rec = gradient_recursion(steps);
  } else if (algorithm == "rhtm") {
    rec = triple_momentum_recursion(steps);
  } else if (algorithm == "rhag") {
    rec = nesterov_recursion(L, zeta);
  } else {
    throw Error(ErrorKind::ConfigError, "unknown robot algorithm " + algorithm);
  }

  // [s][j + 1] for s = 1..N, j = -1..K; empty = not computed
  const auto idx = [&](int s, int j) { return static_cast<size_t>(s - 1) * (K + 2) + (j + 1); };
  std::vector<Point> omega(static_cast<size_t>(N) * (K + 2));
  std::vector<Point> y(omega.size());
  std::vector<Point> z(omega.size());
  std::vector<int> level(N + 1, -2);  // latest j available per s
  const Point p0 = ref[0];

  auto y_at = [&](int s, int j) -> Point {
    if (s <= 0) return p0;
    if (s > N) return Point::Zero();
    return y[idx(s, j)];
  };
  auto latest = [&](int s) -> Point {
    if (s <= 0) return p0;
    return z[idx(s, level[s])];
  };

  Pose pose{p0.x(), p0.y(), prob.initial_heading()};
  run.executed.push_back(pose);
  std::vector<Point> window(5);
  for (int t = 1 - W; t <= N - 1; ++t) {
    const int s0 = t + W;
    if (s0 >= 1 && s0 <= N) {
      const Point v0 = (cfg.init == "hold") ? latest(s0 - 1) : ref_init(s0);
      omega[idx(s0, -1)] = omega[idx(s0, 0)] = y[idx(s0, 0)] = z[idx(s0, 0)] = v0;
      level[s0] = 0;
    }
    for (int j = 1; j <= K; ++j) {
      const int s = t + W - j * p;
      if (s > N || s < 1) continue;
      for (int k = 0; k < 5; ++k) window[k] = y_at(s - 2 + k, j - 1);
      const Point g = prob.partial_gradient(s, window);
      run.gradient_evaluations += partial_gradient_cost(p);
      const Point& w1 = omega[idx(s, j - 1)];
      const Point& w2 = omega[idx(s, j - 2)];
      const Point w_next = (1.0 + rec.omega) * w1 - rec.omega * w2 - rec.c * g;
      if (!w_next.allFinite()) throw Error(ErrorKind::NonFiniteIterate, "robot iterate diverged");
      y[idx(s, j)] = (1.0 + rec.y) * w_next - rec.y * w1;
      z[idx(s, j)] = (1.0 + rec.z) * w_next - rec.z * w1;
      omega[idx(s, j)] = w_next;
      level[s] = j;
    }
    if (t < 0) continue;

    // Head so that the chord of this step's arc points at the planned p_{t+1}.
    const Point target = z[idx(t + 1, K)];
    const Point d = target - Point(pose.x, pose.y);
    const double aim = heading_of(d, pose.heading);
    const double w = 2.0 * wrap_angle(aim - pose.heading) / cfg.dt;
    const double v = d.norm() / (cfg.dt * sinc(0.5 * w * cfg.dt));
    run.v.push_back(v);
    run.w.push_back(w);
    pose = robot_step(pose, v, w, cfg.dt, cfg.sim_dt);
    run.executed.push_back(pose);
  }

  run.planned.assign(N + 1, p0);
  for (int s = 1; s <= N; ++s) run.planned[s] = z[idx(s, K)];
  run.planned_cost = prob.cost(run.planned);
  run.executed_cost = prob.executed_cost(run.executed, run.v, run.w);
  run.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

void write_robot_csv(const std::string& path, const RobotRun& run,
                     const std::vector<Point>& reference, bool executed) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::ConfigError, "cannot write " + path);
  os << std::setprecision(17);
  os << "t,x,y,x_ref,y_ref,v,w\n";
  const int N = static_cast<int>(reference.size()) - 1;
  RobotControls planned;
  if (!executed) planned = controls_of_positions(run.planned, run.dt, run.initial_heading);
  for (int t = 0; t <= N; ++t) {
    double x = 0.0;
    double yv = 0.0;
    double v = 0.0;
    double w = 0.0;
    if (executed) {
      x = run.executed[t].x;
      yv = run.executed[t].y;
      if (t < N) {
        v = run.v[t];
        w = run.w[t];
      }
    } else {
      x = run.planned[t].x();
      yv = run.planned[t].y();
      if (t < N) {
        v = planned.v[t];
        w = planned.w[t];
      }
    }
    os << t << ',' << x << ',' << yv << ',' << reference[t].x() << ',' << reference[t].y() << ','
       << v << ',' << w << '\n';
  }
}

}  // namespace rhgc
