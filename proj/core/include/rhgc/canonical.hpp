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
#include "rhgc/types.hpp"

#include <vector>

namespace rhgc {

/// x_{t+1} = A x_t + B u_t
struct LtiSystem {
  Matrix A;
  Matrix B;

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
  /// Throws DimensionMismatch unless A is n x n and B is n x m with 1 <= m <= n.
  void validate() const;
};

/// A system in controllable canonical form together with the transform that
/// produced it: A = S_x A_orig S_x^{-1}, B = S_x B_orig S_u^{-1}.
///
/// The state splits into m blocks. Block i covers rows
/// [block_start[i], block_start[i] + block_len[i]); its last row actuated[i]
/// carries an arbitrary row of A and the unit entry of B column i. Every other
/// row is a shift row x^{r}_{t+1} = x^{r+1}_t.
struct CanonicalSystem {
  Matrix A;
  Matrix B;
  Matrix S_x;
  Matrix S_u;
  std::vector<int> actuated;
  std::vector<int> block_start;
  std::vector<int> block_len;
  int p = 0;

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
  /// Actuated rows of A, m x n.
  Matrix A_I() const;
};

/// Checks the canonical pattern up to an absolute tolerance of 1e-9 and returns
/// the structure with identity transforms. Throws NotCanonical naming the first
/// offending entry.
CanonicalSystem verify_canonical(const Matrix& A, const Matrix& B, double tol = 1e-9);

/// Numerical rank of [B, AB, ..., A^{n-1}B] with threshold n * eps * sigma_max.
int controllability_rank(const Matrix& A, const Matrix& B);

/// Brings a controllable pair into canonical form. Already canonical input is
/// returned unchanged with identity transforms.
/// Throws DimensionMismatch, NotControllable or IllConditioned.
CanonicalSystem to_canonical(const LtiSystem& sys);

/// Stage costs in canonical coordinates: f(S_x^{-1} x), g(S_u^{-1} u), with
/// mu_f / |S_x|^2, l_f |S_x^{-1}|^2 and l_g |S_u^{-1}|^2. Quadratic costs stay
/// quadratic (Q -> S_x^{-T} Q S_x^{-1}, theta -> S_x theta).
/// Throws SingularTransform if either transform is numerically singular.
CostSequence transform_costs(const CostSequence& costs, const Matrix& S_x, const Matrix& S_u);

}  // namespace rhgc
