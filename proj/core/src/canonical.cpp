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
#include "rhgc/canonical.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rhgc {
namespace {

[[noreturn]] void not_canonical(char which, int row, int col, const std::string& why) {
  std::ostringstream os;
  os << why << " at " << which << "(" << row << "," << col << ")";
  Error e(ErrorKind::NotCanonical, os.str());
  e.matrix = which;
  e.row = row;
  e.col = col;
  throw e;
}

double spectral_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

double condition_number(const Matrix& M) {
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

void fill_blocks(CanonicalSystem& c) {
  c.block_start.clear();
  c.block_len.clear();
  int start = 0;
  c.p = 0;
  for (int k : c.actuated) {
    c.block_start.push_back(start);
    c.block_len.push_back(k - start + 1);
    c.p = std::max(c.p, k - start + 1);
    start = k + 1;
  }
}

}  // namespace

void LtiSystem::validate() const {
  if (A.rows() != A.cols() || A.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "A must be square and non-empty");
  }
  if (B.rows() != A.rows()) throw Error(ErrorKind::DimensionMismatch, "B must have n rows");
  if (B.cols() < 1 || B.cols() > A.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "need 1 <= m <= n");
  }
}

Matrix CanonicalSystem::A_I() const {
  Matrix out(m(), n());
  for (int i = 0; i < m(); ++i) out.row(i) = A.row(actuated[i]);
  return out;
}

CanonicalSystem verify_canonical(const Matrix& A, const Matrix& B, double tol) {
  LtiSystem{A, B}.validate();
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(B.cols());

  CanonicalSystem c;
  for (int j = 0; j < m; ++j) {
    int unit_row = -1;
    for (int r = 0; r < n; ++r) {
      const double v = B(r, j);
      if (std::abs(v) <= tol) continue;
      if (std::abs(v - 1.0) > tol || unit_row >= 0) not_canonical('B', r, j, "unexpected entry");
      unit_row = r;
    }
    if (unit_row < 0) not_canonical('B', 0, j, "column without a unit entry");
    if (!c.actuated.empty() && unit_row <= c.actuated.back()) {
      not_canonical('B', unit_row, j, "unit entries must move down with the column index");
    }
    c.actuated.push_back(unit_row);
  }
  if (c.actuated.back() != n - 1) {
    not_canonical('B', c.actuated.back(), m - 1, "unit entry above the last row leaves it unactuated");
  }

  std::vector<bool> is_actuated(n, false);
  for (int k : c.actuated) is_actuated[k] = true;
  for (int r = 0; r < n; ++r) {
    if (is_actuated[r]) continue;
    for (int col = 0; col < n; ++col) {
      const double want = (col == r + 1) ? 1.0 : 0.0;
      if (std::abs(A(r, col) - want) > tol) not_canonical('A', r, col, "shift row mismatch");
    }
  }

  c.A = A;
  c.B = Matrix::Zero(n, m);
  for (int r = 0; r < n; ++r) {
    if (is_actuated[r]) continue;
    c.A.row(r).setZero();
    c.A(r, r + 1) = 1.0;
  }
  for (int j = 0; j < m; ++j) c.B(c.actuated[j], j) = 1.0;
  c.S_x = Matrix::Identity(n, n);
  c.S_u = Matrix::Identity(m, m);
  fill_blocks(c);
  return c;
}

int controllability_rank(const Matrix& A, const Matrix& B) {
  LtiSystem{A, B}.validate();
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(B.cols());
  Matrix C(n, n * m);
  Matrix block = B;
  for (int k = 0; k < n; ++k) {
    C.middleCols(k * m, m) = block;
    block = A * block;
  }
  Eigen::JacobiSVD<Matrix> svd(C);
  const auto& s = svd.singularValues();
  const double thresh = n * std::numeric_limits<double>::epsilon() * s(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > thresh) ++rank;
  }
  return rank;
}

CanonicalSystem to_canonical(const LtiSystem& sys) {
  sys.validate();
  try {
    return verify_canonical(sys.A, sys.B);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotCanonical) throw;
  }

  const int n = sys.n();
  const int m = sys.m();
  const int rank = controllability_rank(sys.A, sys.B);
  if (rank < n) {
    Error e(ErrorKind::NotControllable,
            "controllability matrix has rank " + std::to_string(rank) + " < " + std::to_string(n));
    e.value = rank;
    throw e;
  }

  // Scan b_1..b_m, A b_1..A b_m, ... and keep vectors independent of the ones
  // kept so far. A dependent A^k b_j ends chain j.
  std::vector<int> mu(m, 0);
  std::vector<bool> active(m, true);
  Matrix ortho(n, 0);
  std::vector<Vector> powers(m);
  for (int j = 0; j < m; ++j) powers[j] = sys.B.col(j);
  int selected = 0;
  for (int k = 0; k < n && selected < n; ++k) {
    for (int j = 0; j < m && selected < n; ++j) {
      if (!active[j]) continue;
      const Vector& v = powers[j];
      Vector r = v;
      for (int pass = 0; pass < 2; ++pass) r -= ortho * (ortho.transpose() * r);
      if (r.norm() > 1e-9 * v.norm() && v.norm() > 0.0) {
        ortho.conservativeResize(n, selected + 1);
        ortho.col(selected) = r.normalized();
        ++selected;
        ++mu[j];
      } else {
        active[j] = false;
      }
    }
    for (int j = 0; j < m; ++j) powers[j] = sys.A * powers[j];
  }
  for (int j = 0; j < m; ++j) {
    if (mu[j] == 0) {
      Error e(ErrorKind::IllConditioned,
              "input column " + std::to_string(j) + " is dependent on the others");
      e.value = std::numeric_limits<double>::infinity();
      throw e;
    }
  }

  Matrix basis(n, n);
  {
    int col = 0;
    for (int j = 0; j < m; ++j) {
      Vector v = sys.B.col(j);
      for (int k = 0; k < mu[j]; ++k) {
        basis.col(col++) = v;
        v = sys.A * v;
      }
    }
  }
  const double cond = condition_number(basis);
  if (!(cond < 1e12)) {
    Error e(ErrorKind::IllConditioned, "selected controllability basis has condition " +
                                           std::to_string(cond));
    e.value = cond;
    throw e;
  }
  const Matrix basis_inv = basis.inverse();

  CanonicalSystem c;
  c.S_x = Matrix(n, n);
  c.S_u = Matrix(m, m);
  {
    int row = 0;
    int last = -1;
    for (int j = 0; j < m; ++j) {
      last += mu[j];
      Eigen::RowVectorXd q = basis_inv.row(last);
      for (int k = 0; k < mu[j]; ++k) {
        c.S_x.row(row++) = q;
        if (k + 1 < mu[j]) q = q * sys.A;
      }
      c.S_u.row(j) = q * sys.B;
      c.actuated.push_back(last);
    }
  }
  const double cond_x = condition_number(c.S_x);
  const double cond_u = condition_number(c.S_u);
  if (!(cond_x < 1e12) || !(cond_u < 1e12)) {
    Error e(ErrorKind::IllConditioned, "canonical transform is numerically singular");
    e.value = std::max(cond_x, cond_u);
    throw e;
  }

  const Matrix Sx_inv = c.S_x.inverse();
  c.A = c.S_x * sys.A * Sx_inv;
  c.B = c.S_x * sys.B * c.S_u.inverse();

  // Structural entries come out exact only up to rounding; check then snap.
  const double scale = 1.0 + c.A.cwiseAbs().maxCoeff();
  std::vector<bool> is_actuated(n, false);
  for (int k : c.actuated) is_actuated[k] = true;
  double dev = 0.0;
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < m; ++j) {
      const double want = (r == c.actuated[j]) ? 1.0 : 0.0;
      dev = std::max(dev, std::abs(c.B(r, j) - want));
    }
    if (is_actuated[r]) continue;
    for (int col = 0; col < n; ++col) {
      const double want = (col == r + 1) ? 1.0 : 0.0;
      dev = std::max(dev, std::abs(c.A(r, col) - want));
    }
  }
  if (dev > 1e-6 * scale) {
    Error e(ErrorKind::IllConditioned,
            "canonical pattern only reached to " + std::to_string(dev));
    e.value = std::max(cond_x, cond_u);
    throw e;
  }
  for (int r = 0; r < n; ++r) {
    if (is_actuated[r]) continue;
    c.A.row(r).setZero();
    c.A(r, r + 1) = 1.0;
  }
  c.B.setZero();
  for (int j = 0; j < m; ++j) c.B(c.actuated[j], j) = 1.0;
  fill_blocks(c);
  return c;
}

CostSequence transform_costs(const CostSequence& costs, const Matrix& S_x, const Matrix& S_u) {
  if (S_x.rows() != S_x.cols() || S_u.rows() != S_u.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "transforms must be square");
  }
  if (costs.f(0).dim() != S_x.rows() || costs.g(0).dim() != S_u.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "transform size does not match the costs");
  }
  for (const Matrix* S : {&S_x, &S_u}) {
    const double cond = condition_number(*S);
    if (!(cond < 1e14)) {
      Error e(ErrorKind::SingularTransform, "transform condition " + std::to_string(cond));
      e.value = cond;
      throw e;
    }
  }
  const Matrix Sx_inv = S_x.inverse();
  const Matrix Su_inv = S_u.inverse();

  auto move = [](const StageCostPtr& c, const Matrix& S, const Matrix& S_inv) -> StageCostPtr {
    if (auto q = std::dynamic_pointer_cast<const QuadraticCost>(c)) {
      return std::make_shared<QuadraticCost>(Matrix(S_inv.transpose() * q->Q() * S_inv),
                                             Vector(S * q->theta()));
    }
    return std::make_shared<LinearMapCost>(c, S_inv);
  };

  std::vector<StageCostPtr> f;
  std::vector<StageCostPtr> g;
  for (const auto& c : costs.f_all()) f.push_back(move(c, S_x, Sx_inv));
  for (const auto& c : costs.g_all()) g.push_back(move(c, S_u, Su_inv));

  const double nx = spectral_norm(S_x);
  const double nx_inv = spectral_norm(Sx_inv);
  const double nu_inv = spectral_norm(Su_inv);
  return CostSequence(std::move(f), std::move(g), costs.mu_f() / (nx * nx),
                      costs.l_f() * nx_inv * nx_inv, costs.l_g() * nu_inv * nu_inv);
}

}  // namespace rhgc
