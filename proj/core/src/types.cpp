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
#include "rhgc/types.hpp"

#include <cmath>
#include <numbers>

namespace rhgc {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotCanonical: return "NotCanonical";
    case ErrorKind::NotControllable: return "NotControllable";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::SingularTransform: return "SingularTransform";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NonPositiveConstant: return "NonPositiveConstant";
    case ErrorKind::InvalidConditionNumber: return "InvalidConditionNumber";
    case ErrorKind::WindowTooShort: return "WindowTooShort";
    case ErrorKind::StageOutOfRange: return "StageOutOfRange";
    case ErrorKind::SteadyStateSolveFailed: return "SteadyStateSolveFailed";
    case ErrorKind::OracleInformationViolation: return "OracleInformationViolation";
    case ErrorKind::NonFiniteIterate: return "NonFiniteIterate";
    case ErrorKind::NegativeRegretBeyondTolerance: return "NegativeRegretBeyondTolerance";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularInnerMatrix: return "SingularInnerMatrix";
    case ErrorKind::SingularReducedHessian: return "SingularReducedHessian";
    case ErrorKind::InadmissibleParameters: return "InadmissibleParameters";
    case ErrorKind::NonIntegerHorizonRatio: return "NonIntegerHorizonRatio";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next() { return engine_(); }

double Rng::uniform01() {
  // 53 high bits -> [0, 1)
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

double Rng::normal() {
  // Box-Muller; u1 in (0, 1].
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace rhgc
