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
#include "rhgc/costs.hpp"
#include "rhgc/types.hpp"

#include <vector>

namespace rhgc {

/// An online control problem posed in canonical coordinates.
struct Instance {
  CanonicalSystem system;
  CostSequence costs;
  Vector x0;

  int horizon() const { return costs.horizon(); }
};

/// Strong convexity and smoothness of C(z): mu_c = mu_f,
/// l_c = p l_f + (p + 1) l_g |[I_m, -A_I]|^2, zeta = l_c / mu_c.
struct Smoothness {
  double mu_c = 0.0;
  double l_c = 0.0;
  double zeta = 0.0;
};
Smoothness smoothness_params(const CanonicalSystem& sys, double mu_f, double l_f, double l_g);
Smoothness smoothness_params(const Instance& inst);

/// z_1..z_N plus the history z_{1-p}..z_0 implied by x_0.
class ZPath {
 public:
  ZPath() = default;
  ZPath(int N, int p, int m);
  ZPath(const CanonicalSystem& sys, int N, const Vector& x0);

  int horizon() const { return N_; }
  int p() const { return p_; }
  int m() const { return m_; }

  /// Valid for 1 - p <= s <= N.
  Vector& operator[](int s);
  const Vector& operator[](int s) const;

  /// z_1..z_N stacked into one vector of length mN.
  Vector stacked() const;
  void set_stacked(const Vector& v);

 private:
  int N_ = 0;
  int p_ = 0;
  int m_ = 0;
  std::vector<Vector> data_;
};

/// z = x^I, the actuated coordinates.
Vector extract_z(const CanonicalSystem& sys, const Vector& x);

/// x_t from z_{t-p+1..t}; window[k] holds z_{t-p+1+k}.
Vector state_of_window(const CanonicalSystem& sys, const std::vector<Vector>& window);

/// x_t and u_t = z_{t+1} - A_I x_t along a path.
Vector state_at(const CanonicalSystem& sys, const ZPath& z, int t);
Vector control_at(const CanonicalSystem& sys, const ZPath& z, int t);

/// z path visited by a state trajectory x_0..x_N.
ZPath z_of_states(const CanonicalSystem& sys, const std::vector<Vector>& states);

/// sum_{t=0}^{N} f_t(x_t) + sum_{t=0}^{N-1} g_t(u_t)
double total_cost(const Instance& inst, const ZPath& z);

/// dC/dz_t using only f_t..f_{t+p-1} and g_{t-1}..g_{t+p-1} (clamped to the
/// horizon). window[k] holds z_{t-p+k}, k = 0..2p; entries past z_N are ignored.
Vector partial_gradient(const CanonicalSystem& sys, const StageCostProvider& costs, int t,
                        const std::vector<Vector>& window);

/// Gradient of C with respect to the stacked z_1..z_N, accumulated stage by stage.
Vector full_gradient(const Instance& inst, const ZPath& z);

/// Number of stage-gradient evaluations charged to one partial_gradient call.
inline int partial_gradient_cost(int p) { return 2 * p + 1; }

/// C(z) = 0.5 z'Hz + c'z + d over the stacked z_1..z_N; quadratic costs only.
struct QuadraticForm {
  Matrix H;
  Vector c;
  double d = 0.0;
};
QuadraticForm quadratic_form(const Instance& inst);

}  // namespace rhgc
