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

#include "rhgc/types.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace rhgc {

/// A convex stage cost on R^d.
class StageCost {
 public:
  virtual ~StageCost() = default;

  virtual int dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  /// Constant Hessian if the cost is quadratic, nullopt otherwise.
  virtual std::optional<Matrix> hessian() const { return std::nullopt; }
};

using StageCostPtr = std::shared_ptr<const StageCost>;

/// 0.5 (x - theta)' Q (x - theta)
class QuadraticCost final : public StageCost {
 public:
  QuadraticCost(Matrix Q, Vector theta);
  explicit QuadraticCost(Matrix Q);

  int dim() const override { return static_cast<int>(theta_.size()); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  std::optional<Matrix> hessian() const override { return Q_; }

  const Matrix& Q() const { return Q_; }
  const Vector& theta() const { return theta_; }

 private:
  Matrix Q_;
  Vector theta_;
};

/// 0.5 mu |x - theta|^2 + w * sum_i log cosh(x_i - theta_i).
/// Hessian eigenvalues lie in [mu, mu + w]; not quadratic.
class LogCoshCost final : public StageCost {
 public:
  LogCoshCost(double mu, double w, Vector theta);

  int dim() const override { return static_cast<int>(theta_.size()); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;

 private:
  double mu_;
  double w_;
  Vector theta_;
};

/// y -> inner(T y).
class LinearMapCost final : public StageCost {
 public:
  LinearMapCost(StageCostPtr inner, Matrix T);

  int dim() const override { return static_cast<int>(T_.cols()); }
  double value(const Vector& y) const override;
  Vector gradient(const Vector& y) const override;
  std::optional<Matrix> hessian() const override;

 private:
  StageCostPtr inner_;
  Matrix T_;
};

/// Read access to f_0..f_N and g_0..g_{N-1}.
class StageCostProvider {
 public:
  virtual ~StageCostProvider() = default;

  virtual const StageCost& f(int t) const = 0;
  virtual const StageCost& g(int t) const = 0;
  virtual int horizon() const = 0;
};

/// Stage costs f_0..f_N, g_0..g_{N-1} together with their convexity and
/// smoothness constants (every f_t mu_f-strongly convex and l_f-smooth,
/// every g_t convex and l_g-smooth).
class CostSequence final : public StageCostProvider {
 public:
  CostSequence() = default;
  CostSequence(std::vector<StageCostPtr> f, std::vector<StageCostPtr> g, double mu_f, double l_f,
               double l_g);

  const StageCost& f(int t) const override;
  const StageCost& g(int t) const override;
  int horizon() const override { return static_cast<int>(g_.size()); }

  const std::vector<StageCostPtr>& f_all() const { return f_; }
  const std::vector<StageCostPtr>& g_all() const { return g_; }
  double mu_f() const { return mu_f_; }
  double l_f() const { return l_f_; }
  double l_g() const { return l_g_; }

  /// True if every stage cost reports a constant Hessian.
  bool is_quadratic() const;

 private:
  std::vector<StageCostPtr> f_;
  std::vector<StageCostPtr> g_;
  double mu_f_ = 0.0;
  double l_f_ = 0.0;
  double l_g_ = 0.0;
};

/// Wraps a provider and refuses access to stages that have not been revealed.
/// Records the largest stage index touched so tests can audit lookahead use.
class LookaheadCosts final : public StageCostProvider {
 public:
  explicit LookaheadCosts(const StageCostProvider& base);

  void reveal_through(int stage) { revealed_ = stage; }
  int revealed_through() const { return revealed_; }
  int max_accessed() const { return max_accessed_; }

  const StageCost& f(int t) const override;
  const StageCost& g(int t) const override;
  int horizon() const override { return base_.horizon(); }

 private:
  void check(int t) const;

  const StageCostProvider& base_;
  int revealed_ = -1;
  mutable int max_accessed_ = -1;
};

/// Uses hessian(), gradient(0) and value(0) to write a quadratic cost as
/// 0.5 x'Hx + c'x + d.
struct QuadraticModel {
  Matrix H;
  Vector c;
  double d = 0.0;
};
QuadraticModel quadratic_model(const StageCost& cost);

}  // namespace rhgc
