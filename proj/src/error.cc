// Copyright 2026 The AltGDmin Authors.
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

#include "altgdmin/error.h"

namespace altgdmin {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kRankTooLarge: return "RankTooLarge";
    case ErrorCode::kConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotOrthonormal: return "NotOrthonormal";
    case ErrorCode::kBadRank: return "BadRank";
    case ErrorCode::kBadKappa: return "BadKappa";
    case ErrorCode::kEmptyPhase: return "EmptyPhase";
    case ErrorCode::kTooManyNodes: return "TooManyNodes";
    case ErrorCode::kAssignmentMismatch: return "AssignmentMismatch";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& message,
                    std::optional<int> column, std::optional<int> iteration) {
  std::string out(error_code_name(code));
  if (iteration) out += " at iteration " + std::to_string(*iteration);
  if (column) out += " (column " + std::to_string(*column) + ")";
  out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<int> column, std::optional<int> iteration)
    : std::runtime_error(compose(code, message, column, iteration)),
      code_(code),
      base_message_(message),
      column_(column),
      iteration_(iteration) {}

Error Error::with_iteration(int iteration) const {
  return Error(code_, base_message_, column_, iteration);
}

}  // namespace altgdmin
