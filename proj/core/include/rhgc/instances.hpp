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

#include "rhgc/canonical.hpp"
#include "rhgc/lqt.hpp"
#include "rhgc/types.hpp"

#include <cstdint>
#include <vector>

namespace rhgc {

/// Ranges for randomly drawn tracking costs. Diagonal entries of Q_t, R_t and
/// every coordinate of theta_t are drawn uniformly.
struct RandomCostSpec {
  double q_lo = 1.0;
  double q_hi = 2.0;
  double r_lo = 1.0;
  double r_hi = 2.0;
  double theta_lo = -10.0;
  double theta_hi = 10.0;
  /// Draw one (Q, R, theta) and reuse it at every stage.
  bool time_invariant = false;
  /// Terminal cost: "stage" draws Q_N, theta_N like any other stage, "bias"
  /// uses the infinite-horizon bias function (time-invariant costs only).
  std::string terminal = "stage";
};

/// A = [0 1; -1/6 5/6], B = [0; 1].
CanonicalSystem example_system();

/// Tracking instance on a canonical system with random diagonal costs.
QuadraticInstance random_tracking_instance(const CanonicalSystem& sys, int N,
                                           const RandomCostSpec& spec, std::uint64_t seed);

/// Controllable pair with entries drawn from N(0, 1), redrawn until
/// to_canonical succeeds with a moderately conditioned transform.
LtiSystem random_controllable_system(int n, int m, Rng& rng);

/// Quadratic instance given in original coordinates, moved to canonical ones.
QuadraticInstance canonical_quadratic_instance(const LtiSystem& sys, const std::vector<Matrix>& Q,
                                               const std::vector<Matrix>& R,
                                               const std::vector<Vector>& theta, const Vector& x0);

/// Random system, random SPD Q_t (eigenvalues in [1, 3]), diagonal R_t in [0.5, 2]
/// and theta_t in [-5, 5], all in original coordinates, then made canonical.
QuadraticInstance random_general_instance(int n, int m, int N, std::uint64_t seed);

}  // namespace rhgc
