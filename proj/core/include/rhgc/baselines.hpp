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

#include "rhgc/algorithms.hpp"
#include "rhgc/lqt.hpp"
#include "rhgc/reformulate.hpp"

#include <string>
#include <vector>

namespace rhgc {

struct OfflineOptimum {
  ZPath z;
  std::vector<Vector> x;
  std::vector<Vector> u;
  double J = 0.0;
  std::string method;
  /// |J_method - J_check| / (1 + |J_method|) against an independent solve; NaN if none ran.
  double cross_check_gap = 0.0;
};

/// Quadratic costs: direct solve of the stacked normal equations.
/// Otherwise: batch triple momentum until |grad C| <= 1e-10 (1e6 sweeps at most,
/// NoConvergence past that).
OfflineOptimum offline_optimal(const Instance& inst);

/// Riccati recursion, cross-checked against the stacked solve.
OfflineOptimum offline_optimal(const QuadraticInstance& inst);

/// Smoothness of the W-stage truncated problem in the stacked controls:
/// l_f |G_W|^2 + l_g, G_W the input-to-state map over W stages.
double submpc_smoothness(const CanonicalSystem& sys, int W, double l_f, double l_g);

/// Suboptimal MPC: at each t, `iterations` Nesterov steps (step 1 / L_W) on the
/// W-stage truncated problem, warm-started from the previous plan shifted by
/// one stage with its last control repeated. f_N enters only when the window
/// reaches the horizon. Each iteration charges two stage-gradient evaluations
/// per stage in the window (2W away from the horizon).
OnlineRun submpc_run(const Instance& inst, int W, int iterations);

}  // namespace rhgc
