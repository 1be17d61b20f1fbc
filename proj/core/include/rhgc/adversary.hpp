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

#include "rhgc/lqt.hpp"
#include "rhgc/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rhgc {

/// Hard instance family: cyclic shift system with n = p, B = e_n, Q = delta I,
/// R = 1, terminal cost 0.5 x' P^e x, and targets theta_t = +-sigma per
/// coordinate, redrawn at every epoch start.
struct LowerBoundInstance {
  double zeta = 0.0;
  int p = 0;
  int N = 0;
  double L_N = 0.0;
  double theta_bar = 0.0;
  std::uint64_t seed = 0;
  std::string rng = "mt19937_64";

  double delta = 0.0;  // 4 / ((zeta - 1) p)
  double sigma = 0.0;  // theta_bar / sqrt(n)
  int epoch_length = 0;            // Delta
  int epochs = 0;                  // E
  std::vector<int> epoch_starts;   // 1, Delta + 1, ...
  Matrix P_e;
  QuadraticInstance quad;

  /// Bounds on the spectrum of C(z): delta n and delta n + 4.
  double mu() const;
  double L() const;
};

/// Throws InadmissibleParameters unless zeta > 1, p >= 1, N >= 2, theta_bar > 0
/// and 4 theta_bar <= L_N <= (2N + 1) theta_bar.
LowerBoundInstance build_instance(double zeta, int p, int N, double L_N, double theta_bar,
                                  std::uint64_t seed);

/// 1 <= W <= N / 3
bool window_admissible(int W, int N);

/// C(z) = 0.5 z'Hz - eta'z + const for the family, assembled entry by entry.
struct HSystem {
  Matrix H;
  Vector eta;
};
HSystem assemble_h_system(const LowerBoundInstance& inst);
Matrix assemble_h(double delta, int n, int N, const Matrix& P_e);

struct PeCheck {
  double delta = 0.0;
  Vector q;  // diagonal of P^e
  double max_offdiag = 0.0;
  double max_spacing_error = 0.0;
  double qn_formula = 0.0;
  bool diagonal = false;
  bool spacing = false;
  bool q1_bracket = false;
  bool qn_closed_form = false;

  bool passed() const { return diagonal && spacing && q1_bracket && qn_closed_form; }
};
/// P^e is diagonal with q_i = q_1 + (i - 1) delta, delta < q_1 < delta + 1,
/// q_n = (n delta + sqrt(n^2 delta^2 + 4 n delta)) / 2.
PeCheck verify_pe_form(double zeta, int p);

struct YDecayCheck {
  bool skipped = false;
  std::string reason;
  double max_block_deviation = 0.0;  // distance of H^{-1} from (y_ij I_n)
  double min_entry = 0.0;            // min y_ij
  double min_bound_ratio = 0.0;      // min over tau >= 0 of y_{t,t+tau} / ((1-rho) rho^tau / (delta n + 2))
  double eig_min = 0.0;
  double eig_max = 0.0;
  bool block_structure = false;
  bool positive = false;
  bool bound = false;
  bool spectrum = false;

  bool passed() const { return !skipped && block_structure && positive && bound && spectrum; }
};
/// Skipped (with a reason) when N is not a multiple of n.
YDecayCheck verify_y_decay(double zeta, int n, int N);

struct LowerBoundEstimate {
  std::string algorithm;
  std::vector<int> K;
  std::vector<int> W;
  std::vector<double> mean_regret;
  std::vector<double> upper_bound;  // bound factor times mean FOSS regret
  std::vector<double> lower_curve;  // rho^{2K} L_N
  double mean_foss_regret = 0.0;
  double c1 = 0.0;                  // largest constant keeping c1 rho^{2K} L_N under every mean
  double rho = 0.0;
  int seeds = 0;
};

/// Runs `algorithm` (rhgd, rhag or rhtm) with step sizes from the family's
/// spectral bounds on fresh instances for every seed and W = K p + 1.
LowerBoundEstimate empirical_lower_bound(const std::string& algorithm, double zeta, int p, int N,
                                         double L_N, double theta_bar,
                                         const std::vector<std::uint64_t>& seeds,
                                         const std::vector<int>& K_values);

}  // namespace rhgc
