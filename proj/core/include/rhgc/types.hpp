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

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace rhgc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class ErrorKind {
  DimensionMismatch,
  NotCanonical,
  NotControllable,
  IllConditioned,
  SingularTransform,
  LengthMismatch,
  NonPositiveConstant,
  InvalidConditionNumber,
  WindowTooShort,
  StageOutOfRange,
  SteadyStateSolveFailed,
  OracleInformationViolation,
  NonFiniteIterate,
  NegativeRegretBeyondTolerance,
  NoConvergence,
  SingularInnerMatrix,
  SingularReducedHessian,
  InadmissibleParameters,
  NonIntegerHorizonRatio,
  ConfigError,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library. `kind()` is stable and tests match on it;
/// the message carries the offending values.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const { return kind_; }

  /// Offending entry for NotCanonical; -1 otherwise.
  int row = -1;
  int col = -1;
  /// 'A' or 'B' for NotCanonical.
  char matrix = '\0';
  /// Rank for NotControllable, condition estimate for IllConditioned,
  /// residual for NoConvergence / SteadyStateSolveFailed, stage for StageOutOfRange.
  double value = 0.0;

 private:
  ErrorKind kind_;
};

/// Unit-interval and sign draws built directly on the mt19937_64 output so that
/// streams are reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  double uniform01();
  double uniform(double lo, double hi);
  /// +1 or -1 with equal probability.
  double sign();
  double normal();
  std::uint64_t next();

 private:
  std::mt19937_64 engine_;
};

}  // namespace rhgc
