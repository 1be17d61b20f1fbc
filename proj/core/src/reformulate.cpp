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
#include "rhgc/reformulate.hpp"

#include <cmath>
#include <utility>

namespace rhgc {
namespace {

double spectral_norm(const Matrix& M) {
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

void check_stage(int t, int lo, int hi) {
  if (t < lo || t > hi) {
    Error e(ErrorKind::StageOutOfRange, "stage " + std::to_string(t) + " outside [" +
                                            std::to_string(lo) + ", " + std::to_string(hi) + "]");
    e.value = t;
    throw e;
  }
}

/// x_t (or u_t) = sum_s E_s z_s + offset, over z_1..z_N.
struct AffineMap {
  std::vector<std::pair<int, Matrix>> terms;
  Vector offset;
};

AffineMap state_map(const CanonicalSystem& sys, const ZPath& history, int t) {
  const int n = sys.n();
  const int m = sys.m();
  AffineMap a;
  a.offset = Vector::Zero(n);
  for (int s = t - sys.p + 1; s <= t; ++s) {
    Matrix E = Matrix::Zero(n, m);
    bool any = false;
    for (int i = 0; i < m; ++i) {
      const int l = s - t + sys.block_len[i] - 1;
      if (l < 0) continue;
      const int row = sys.block_start[i] + l;
      if (s >= 1) {
        E(row, i) = 1.0;
        any = true;
      } else {
        a.offset(row) = history[s](i);
      }
    }
    if (any) a.terms.emplace_back(s, std::move(E));
  }
  return a;
}

AffineMap control_map(const CanonicalSystem& sys, const ZPath& history, int t) {
  const Matrix AI = sys.A_I();
  AffineMap x = state_map(sys, history, t);
  AffineMap u;
  u.offset = -AI * x.offset;
  for (auto& [s, E] : x.terms) u.terms.emplace_back(s, Matrix(-AI * E));
  u.terms.emplace_back(t + 1, Matrix::Identity(sys.m(), sys.m()));
  return u;
}

void accumulate(QuadraticForm& out, const AffineMap& a, const QuadraticModel& q, int m) {
  const Vector lin = q.H * a.offset + q.c;
  for (const auto& [s1, E1] : a.terms) {
    out.c.segment((s1 - 1) * m, m) += E1.transpose() * lin;
    for (const auto& [s2, E2] : a.terms) {
      out.H.block((s1 - 1) * m, (s2 - 1) * m, m, m) += E1.transpose() * q.H * E2;
    }
  }
  out.d += 0.5 * a.offset.dot(q.H * a.offset) + q.c.dot(a.offset) + q.d;
}

}  // namespace

Smoothness smoothness_params(const CanonicalSystem& sys, double mu_f, double l_f, double l_g) {
  if (!(mu_f > 0.0) || !(l_f > 0.0) || !(l_g > 0.0)) {
    throw Error(ErrorKind::NonPositiveConstant, "mu_f, l_f and l_g must be positive");
  }
  Matrix J(sys.m(), sys.m() + sys.n());
  J << Matrix::Identity(sys.m(), sys.m()), -sys.A_I();
  const double nj = spectral_norm(J);
  Smoothness s;
  s.mu_c = mu_f;
  s.l_c = sys.p * l_f + (sys.p + 1) * l_g * nj * nj;
  s.zeta = s.l_c / s.mu_c;
  return s;
}

Smoothness smoothness_params(const Instance& inst) {
  return smoothness_params(inst.system, inst.costs.mu_f(), inst.costs.l_f(), inst.costs.l_g());
}

ZPath::ZPath(int N, int p, int m) : N_(N), p_(p), m_(m), data_(N + p, Vector::Zero(m)) {}

ZPath::ZPath(const CanonicalSystem& sys, int N, const Vector& x0) : ZPath(N, sys.p, sys.m()) {
  if (x0.size() != sys.n()) throw Error(ErrorKind::DimensionMismatch, "x0 has the wrong size");
  for (int i = 0; i < sys.m(); ++i) {
    for (int l = 0; l < sys.block_len[i]; ++l) {
      // x0 block i holds z^i_{1-len}, ..., z^i_0
      (*this)[1 - sys.block_len[i] + l](i) = x0(sys.block_start[i] + l);
    }
  }
}

Vector& ZPath::operator[](int s) {
  check_stage(s, 1 - p_, N_);
  return data_[s + p_ - 1];
}

const Vector& ZPath::operator[](int s) const {
  check_stage(s, 1 - p_, N_);
  return data_[s + p_ - 1];
}

Vector ZPath::stacked() const {
  Vector v(m_ * N_);
  for (int s = 1; s <= N_; ++s) v.segment((s - 1) * m_, m_) = (*this)[s];
  return v;
}

void ZPath::set_stacked(const Vector& v) {
  if (v.size() != m_ * N_) throw Error(ErrorKind::DimensionMismatch, "stacked z has the wrong size");
  for (int s = 1; s <= N_; ++s) (*this)[s] = v.segment((s - 1) * m_, m_);
}

Vector extract_z(const CanonicalSystem& sys, const Vector& x) {
  if (x.size() != sys.n()) throw Error(ErrorKind::DimensionMismatch, "state has the wrong size");
  Vector z(sys.m());
  for (int i = 0; i < sys.m(); ++i) z(i) = x(sys.actuated[i]);
  return z;
}

Vector state_of_window(const CanonicalSystem& sys, const std::vector<Vector>& window) {
  if (static_cast<int>(window.size()) != sys.p) {
    throw Error(ErrorKind::LengthMismatch, "state window must hold p entries");
  }
  Vector x(sys.n());
  for (int i = 0; i < sys.m(); ++i) {
    const int len = sys.block_len[i];
    for (int l = 0; l < len; ++l) x(sys.block_start[i] + l) = window[sys.p - len + l](i);
  }
  return x;
}

Vector state_at(const CanonicalSystem& sys, const ZPath& z, int t) {
  check_stage(t, 0, z.horizon());
  Vector x(sys.n());
  for (int i = 0; i < sys.m(); ++i) {
    const int len = sys.block_len[i];
    for (int l = 0; l < len; ++l) x(sys.block_start[i] + l) = z[t - len + 1 + l](i);
  }
  return x;
}

Vector control_at(const CanonicalSystem& sys, const ZPath& z, int t) {
  check_stage(t, 0, z.horizon() - 1);
  return z[t + 1] - sys.A_I() * state_at(sys, z, t);
}

ZPath z_of_states(const CanonicalSystem& sys, const std::vector<Vector>& states) {
  if (states.size() < 2) throw Error(ErrorKind::LengthMismatch, "need states x_0..x_N with N >= 1");
  const int N = static_cast<int>(states.size()) - 1;
  ZPath z(sys, N, states.front());
  for (int t = 1; t <= N; ++t) z[t] = extract_z(sys, states[t]);
  return z;
}

double total_cost(const Instance& inst, const ZPath& z) {
  const int N = inst.horizon();
  if (z.horizon() != N) throw Error(ErrorKind::LengthMismatch, "path and cost horizons differ");
  const Matrix AI = inst.system.A_I();
  double J = 0.0;
  Vector x = state_at(inst.system, z, 0);
  for (int t = 0; t < N; ++t) {
    J += inst.costs.f(t).value(x);
    J += inst.costs.g(t).value(z[t + 1] - AI * x);
    x = state_at(inst.system, z, t + 1);
  }
  J += inst.costs.f(N).value(x);
  return J;
}

Vector partial_gradient(const CanonicalSystem& sys, const StageCostProvider& costs, int t,
                        const std::vector<Vector>& window) {
  const int p = sys.p;
  const int m = sys.m();
  const int N = costs.horizon();
  check_stage(t, 1, N);
  if (static_cast<int>(window.size()) != 2 * p + 1) {
    throw Error(ErrorKind::LengthMismatch, "gradient window must hold 2p + 1 entries");
  }
  const Matrix AI = sys.A_I();

  // x_tau from window entries tau - p + 1 .. tau, i.e. offsets tau - t + 1 ..
  auto x_at = [&](int tau) {
    const int first = tau - t + 1;
    std::vector<Vector> w(window.begin() + first, window.begin() + first + p);
    return state_of_window(sys, w);
  };
  // row of x_tau that holds z_t in block i, or -1
  auto row_of = [&](int tau, int i) {
    const int lag = tau - t;
    if (lag < 0 || lag >= sys.block_len[i]) return -1;
    return sys.block_start[i] + sys.block_len[i] - 1 - lag;
  };

  Vector grad = Vector::Zero(m);
  for (int tau = t; tau <= std::min(t + p - 1, N); ++tau) {
    const Vector gf = costs.f(tau).gradient(x_at(tau));
    for (int i = 0; i < m; ++i) {
      const int r = row_of(tau, i);
      if (r >= 0) grad(i) += gf(r);
    }
  }
  for (int tau = t - 1; tau <= std::min(t + p - 1, N - 1); ++tau) {
    const Vector x = x_at(tau);
    const Vector u = window[tau - t + 1 + p] - AI * x;
    const Vector gg = costs.g(tau).gradient(u);
    if (tau + 1 == t) grad += gg;
    const Vector back = AI.transpose() * gg;
    for (int i = 0; i < m; ++i) {
      const int r = row_of(tau, i);
      if (r >= 0) grad(i) -= back(r);
    }
  }
  return grad;
}

Vector full_gradient(const Instance& inst, const ZPath& z) {
  const CanonicalSystem& sys = inst.system;
  const int N = inst.horizon();
  const int m = sys.m();
  const Matrix AI = sys.A_I();
  Vector grad = Vector::Zero(m * N);

  // scatter an n-vector defined on x_tau back onto the z entries it was built from
  auto scatter = [&](int tau, const Vector& gx, double sign) {
    for (int i = 0; i < m; ++i) {
      const int len = sys.block_len[i];
      for (int l = 0; l < len; ++l) {
        const int s = tau - len + 1 + l;
        if (s >= 1) grad((s - 1) * m + i) += sign * gx(sys.block_start[i] + l);
      }
    }
  };

  for (int tau = 0; tau <= N; ++tau) {
    const Vector x = state_at(sys, z, tau);
    scatter(tau, inst.costs.f(tau).gradient(x), 1.0);
    if (tau == N) break;
    const Vector gg = inst.costs.g(tau).gradient(z[tau + 1] - AI * x);
    grad.segment(tau * m, m) += gg;
    scatter(tau, AI.transpose() * gg, -1.0);
  }
  return grad;
}

QuadraticForm quadratic_form(const Instance& inst) {
  if (!inst.costs.is_quadratic()) {
    throw Error(ErrorKind::DimensionMismatch, "quadratic_form needs quadratic stage costs");
  }
  const int N = inst.horizon();
  const int m = inst.system.m();
  const ZPath history(inst.system, N, inst.x0);
  QuadraticForm out;
  out.H = Matrix::Zero(m * N, m * N);
  out.c = Vector::Zero(m * N);
  for (int t = 0; t <= N; ++t) {
    accumulate(out, state_map(inst.system, history, t), quadratic_model(inst.costs.f(t)), m);
    if (t < N) {
      accumulate(out, control_map(inst.system, history, t), quadratic_model(inst.costs.g(t)), m);
    }
  }
  return out;
}

}  // namespace rhgc
