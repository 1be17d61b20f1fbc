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
#include "rhgc/costs.hpp"

#include <cmath>
#include <sstream>

namespace rhgc {

QuadraticCost::QuadraticCost(Matrix Q, Vector theta) : Q_(std::move(Q)), theta_(std::move(theta)) {
  if (Q_.rows() != Q_.cols() || Q_.rows() != theta_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "QuadraticCost: Q must be d x d with d = dim(theta)");
  }
}

QuadraticCost::QuadraticCost(Matrix Q) : QuadraticCost(Q, Vector::Zero(Q.rows())) {}

double QuadraticCost::value(const Vector& x) const {
  const Vector d = x - theta_;
  return 0.5 * d.dot(Q_ * d);
}

Vector QuadraticCost::gradient(const Vector& x) const { return Q_ * (x - theta_); }

LogCoshCost::LogCoshCost(double mu, double w, Vector theta)
    : mu_(mu), w_(w), theta_(std::move(theta)) {
  if (mu_ <= 0.0 || w_ < 0.0) {
    throw Error(ErrorKind::NonPositiveConstant, "LogCoshCost needs mu > 0 and w >= 0");
  }
}

double LogCoshCost::value(const Vector& x) const {
  const Vector d = x - theta_;
  double s = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    // log cosh a = |a| + log1p(exp(-2|a|)) - log 2, stable for large |a|
    const double a = std::abs(d[i]);
    s += a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
  }
  return 0.5 * mu_ * d.squaredNorm() + w_ * s;
}

Vector LogCoshCost::gradient(const Vector& x) const {
  const Vector d = x - theta_;
  return mu_ * d + w_ * d.array().tanh().matrix();
}

LinearMapCost::LinearMapCost(StageCostPtr inner, Matrix T) : inner_(std::move(inner)), T_(std::move(T)) {
  if (inner_->dim() != T_.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "LinearMapCost: T rows must match the inner cost");
  }
}

double LinearMapCost::value(const Vector& y) const { return inner_->value(T_ * y); }

Vector LinearMapCost::gradient(const Vector& y) const {
  return T_.transpose() * inner_->gradient(T_ * y);
}

std::optional<Matrix> LinearMapCost::hessian() const {
  auto h = inner_->hessian();
  if (!h) return std::nullopt;
  return Matrix(T_.transpose() * (*h) * T_);
}

CostSequence::CostSequence(std::vector<StageCostPtr> f, std::vector<StageCostPtr> g, double mu_f,
                           double l_f, double l_g)
    : f_(std::move(f)), g_(std::move(g)), mu_f_(mu_f), l_f_(l_f), l_g_(l_g) {
  if (f_.size() != g_.size() + 1) {
    std::ostringstream os;
    os << "expected N + 1 state costs for N control costs, got " << f_.size() << " and "
       << g_.size();
    throw Error(ErrorKind::LengthMismatch, os.str());
  }
  if (g_.empty()) throw Error(ErrorKind::LengthMismatch, "horizon must be at least 1");
  if (!(mu_f_ > 0.0) || !(l_f_ > 0.0) || !(l_g_ > 0.0) || mu_f_ > l_f_) {
    std::ostringstream os;
    os << "need 0 < mu_f <= l_f and l_g > 0, got mu_f=" << mu_f_ << " l_f=" << l_f_
       << " l_g=" << l_g_;
    throw Error(ErrorKind::NonPositiveConstant, os.str());
  }
  for (const auto& c : f_) {
    if (!c || c->dim() != f_.front()->dim()) {
      throw Error(ErrorKind::DimensionMismatch, "state costs must share one dimension");
    }
  }
  for (const auto& c : g_) {
    if (!c || c->dim() != g_.front()->dim()) {
      throw Error(ErrorKind::DimensionMismatch, "control costs must share one dimension");
    }
  }
}

const StageCost& CostSequence::f(int t) const {
  if (t < 0 || t >= static_cast<int>(f_.size())) {
    Error e(ErrorKind::StageOutOfRange, "f_" + std::to_string(t));
    e.value = t;
    throw e;
  }
  return *f_[t];
}

const StageCost& CostSequence::g(int t) const {
  if (t < 0 || t >= static_cast<int>(g_.size())) {
    Error e(ErrorKind::StageOutOfRange, "g_" + std::to_string(t));
    e.value = t;
    throw e;
  }
  return *g_[t];
}

bool CostSequence::is_quadratic() const {
  for (const auto& c : f_) {
    if (!c->hessian()) return false;
  }
  for (const auto& c : g_) {
    if (!c->hessian()) return false;
  }
  return true;
}

LookaheadCosts::LookaheadCosts(const StageCostProvider& base) : base_(base) {}

void LookaheadCosts::check(int t) const {
  if (t > revealed_) {
    Error e(ErrorKind::OracleInformationViolation,
            "stage " + std::to_string(t) + " read while only stages <= " +
                std::to_string(revealed_) + " are revealed");
    e.value = t;
    throw e;
  }
  if (t > max_accessed_) max_accessed_ = t;
}

const StageCost& LookaheadCosts::f(int t) const {
  check(t);
  return base_.f(t);
}

const StageCost& LookaheadCosts::g(int t) const {
  check(t);
  return base_.g(t);
}

QuadraticModel quadratic_model(const StageCost& cost) {
  auto h = cost.hessian();
  if (!h) throw Error(ErrorKind::DimensionMismatch, "quadratic_model on a non-quadratic cost");
  const Vector zero = Vector::Zero(cost.dim());
  return {*h, cost.gradient(zero), cost.value(zero)};
}

}  // namespace rhgc
