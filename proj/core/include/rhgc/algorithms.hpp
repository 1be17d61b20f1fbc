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

#include "rhgc/costs.hpp"
#include "rhgc/reformulate.hpp"
#include "rhgc/types.hpp"

#include <string>
#include <vector>

namespace rhgc {

/// Step sizes derived from (l_c, zeta). phi = 1 - 1/sqrt(zeta).
struct StepSizes {
  double gamma_g = 0.0;      // 1 / l_c
  double gamma_c = 0.0;      // (1 + phi) / l_c
  double gamma_omega = 0.0;  // phi^2 / (2 - phi)
  double gamma_y = 0.0;      // phi^2 / ((1 + phi)(2 - phi))
  double gamma_z = 0.0;      // phi^2 / (1 - phi^2)
  double phi = 0.0;
};

/// Throws NonPositiveConstant if l_c <= 0 and InvalidConditionNumber if zeta < 1.
StepSizes compute_stepsizes(double l_c, double zeta);

/// Coefficients of the three-sequence recursion
///   omega(j+1) = (1 + omega) omega(j) - omega omega(j-1) - c grad C(y(j))
///   y(j+1)     = (1 + y) omega(j+1) - y omega(j)
///   z(j+1)     = (1 + z) omega(j+1) - z omega(j)
/// Plain gradient descent is {c, 0, 0, 0}.
struct Recursion {
  double c = 0.0;
  double omega = 0.0;
  double y = 0.0;
  double z = 0.0;
};
Recursion gradient_recursion(const StepSizes& s);
Recursion triple_momentum_recursion(const StepSizes& s);
/// Nesterov: c = 1/l_c, omega = y = (sqrt(zeta) - 1)/(sqrt(zeta) + 1), z = 0.
Recursion nesterov_recursion(double l_c, double zeta);

/// What an initialization oracle may see when producing z_s(0): the system,
/// stage costs revealed so far (through stage s - 1) and the smoothness bounds.
struct OracleContext {
  const CanonicalSystem& system;
  const StageCostProvider& costs;
  double l_f;
  double l_g;
};

class InitOracle {
 public:
  virtual ~InitOracle() = default;
  virtual std::string name() const = 0;
  virtual Vector initialize(int s, const OracleContext& ctx) const = 0;
};

/// Follow the optimal steady state: z_s(0) = z^e of stage s - 1.
class FossOracle final : public InitOracle {
 public:
  std::string name() const override { return "foss"; }
  Vector initialize(int s, const OracleContext& ctx) const override;
};

/// Replays a fixed path. Only meant for tests: it ignores the information limit.
class ReplayOracle final : public InitOracle {
 public:
  explicit ReplayOracle(ZPath path) : path_(std::move(path)) {}
  std::string name() const override { return "replay"; }
  Vector initialize(int s, const OracleContext& ctx) const override;

 private:
  ZPath path_;
};

struct OnlineRun {
  std::string algorithm;
  int W = 0;
  int K = 0;
  ZPath z_initial;  // z(0)
  ZPath z_final;    // z(K)
  std::vector<Vector> x;  // realized states 0..N
  std::vector<Vector> u;  // applied controls 0..N-1
  double cost = 0.0;
  long gradient_evaluations = 0;
  /// Largest stage index read by the time each online step t = 1 - W .. N - 1 finished.
  std::vector<int> max_stage_read;
};

/// K = floor((W - 1) / p).
int iterations_for_window(int W, int p);

/// Online receding-horizon run of an arbitrary three-sequence recursion.
/// Throws WindowTooShort, OracleInformationViolation, NonFiniteIterate.
OnlineRun receding_horizon_run(const Instance& inst, int W, const InitOracle& oracle,
                               const Recursion& rec, const std::string& name);

OnlineRun rhgd_run(const Instance& inst, int W, const InitOracle& oracle);
OnlineRun rhgd_run(const Instance& inst, int W, const InitOracle& oracle, const StepSizes& steps);
OnlineRun rhtm_run(const Instance& inst, int W, const InitOracle& oracle);
OnlineRun rhtm_run(const Instance& inst, int W, const InitOracle& oracle, const StepSizes& steps);
OnlineRun rhag_run(const Instance& inst, int W, const InitOracle& oracle);
OnlineRun rhag_run(const Instance& inst, int W, const InitOracle& oracle, double l_c, double zeta);
/// The oracle's own controller: u_t = z_{t+1}(0) - A_I x_t.
OnlineRun oracle_run(const Instance& inst, const InitOracle& oracle);

/// Whole-horizon iterations used as the offline reference for the online runs.
ZPath batch_gradient_descent(const Instance& inst, const ZPath& z0, int iterations, double step);
ZPath batch_recursion(const Instance& inst, const ZPath& z0, int iterations, const Recursion& rec);

/// zeta ((zeta - 1) / zeta)^K
double gd_bound_factor(double zeta, int K);
/// zeta^2 ((sqrt(zeta) - 1) / sqrt(zeta))^{2K}
double tm_bound_factor(double zeta, int K);

struct RegretReport {
  double J_online = 0.0;
  double J_star = 0.0;
  double regret = 0.0;
  double bound_factor = 0.0;
};

/// Throws NegativeRegretBeyondTolerance if the regret is below -1e-7.
RegretReport dynamic_regret(const OnlineRun& run, double J_star, double zeta);

}  // namespace rhgc
