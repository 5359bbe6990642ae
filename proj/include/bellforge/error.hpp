// Copyright 2026 The BellForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bellforge {

enum class ErrorCode {
  NonSymmetricInput,
  NonFiniteEntry,
  NotSymplectic,
  InvalidModeIndex,
  ParameterOutOfRange,
  SingularPassivePart,
  NotNormalizable,
  PatternModeClash,
  TooManyDetections,
  WrongDetectionCount,
  CutoffTooSmall,
  DimensionExplosion,
  LabelingMismatch,
  NotNormalized,
  BudgetZero,
  InfeasibleConfig,
  SchemaViolation,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSymmetricInput: return "NonSymmetricInput";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::NotSymplectic: return "NotSymplectic";
    case ErrorCode::InvalidModeIndex: return "InvalidModeIndex";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::SingularPassivePart: return "SingularPassivePart";
    case ErrorCode::NotNormalizable: return "NotNormalizable";
    case ErrorCode::PatternModeClash: return "PatternModeClash";
    case ErrorCode::TooManyDetections: return "TooManyDetections";
    case ErrorCode::WrongDetectionCount: return "WrongDetectionCount";
    case ErrorCode::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorCode::DimensionExplosion: return "DimensionExplosion";
    case ErrorCode::LabelingMismatch: return "LabelingMismatch";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::BudgetZero: return "BudgetZero";
    case ErrorCode::InfeasibleConfig: return "InfeasibleConfig";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
  }
  return "Unknown";
}

/// Numeric failures (as opposed to bad input) map to CLI exit code 3.
inline bool is_numeric_failure(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSymplectic:
    case ErrorCode::SingularPassivePart:
    case ErrorCode::NotNormalizable:
    case ErrorCode::NonFiniteEntry:
    case ErrorCode::DimensionExplosion:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bellforge
