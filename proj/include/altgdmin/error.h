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

#ifndef ALTGDMIN_ERROR_H_
#define ALTGDMIN_ERROR_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace altgdmin {

enum class ErrorCode {
  kRankDeficient,
  kRankTooLarge,
  kConvergenceFailure,
  kDimensionMismatch,
  kNotOrthonormal,
  kBadRank,
  kBadKappa,
  kEmptyPhase,
  kTooManyNodes,
  kAssignmentMismatch,
  kInvalidConfig,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported with this exception. `column` names the
// offending column for per-column failures, `iteration` is attached by the
// solver when a step fails inside the main loop.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<int> column = std::nullopt,
        std::optional<int> iteration = std::nullopt);

  ErrorCode code() const { return code_; }
  std::optional<int> column() const { return column_; }
  std::optional<int> iteration() const { return iteration_; }

  Error with_iteration(int iteration) const;

 private:
  ErrorCode code_;
  std::string base_message_;
  std::optional<int> column_;
  std::optional<int> iteration_;
};

}  // namespace altgdmin

#endif  // ALTGDMIN_ERROR_H_
