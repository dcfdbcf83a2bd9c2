// Copyright 2026 The Gridflow Authors
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

#ifndef GRIDFLOW_ERROR_HPP_
#define GRIDFLOW_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridflow {

enum class ErrorCode {
  kOutOfGrid,
  kTerminalHasNoBlock,
  kTerminalArcHasNoMate,
  kNonConvexPrior,
  kCapacityOverflow,
  kEmptyColumn,
  kFlowNotMaximal,
  kTooManySegments,
  kInvalidArgument,
  kInvalidInstance,
  kParseError,
  kIoError,
  kVerificationFailed,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOutOfGrid: return "OUT_OF_GRID";
    case ErrorCode::kTerminalHasNoBlock: return "TERMINAL_HAS_NO_BLOCK";
    case ErrorCode::kTerminalArcHasNoMate: return "TERMINAL_ARC_HAS_NO_MATE";
    case ErrorCode::kNonConvexPrior: return "NON_CONVEX_PRIOR";
    case ErrorCode::kCapacityOverflow: return "CAPACITY_OVERFLOW";
    case ErrorCode::kEmptyColumn: return "EMPTY_COLUMN";
    case ErrorCode::kFlowNotMaximal: return "FLOW_NOT_MAXIMAL";
    case ErrorCode::kTooManySegments: return "TOO_MANY_SEGMENTS";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kInvalidInstance: return "INVALID_INSTANCE";
    case ErrorCode::kParseError: return "PARSE_ERROR";
    case ErrorCode::kIoError: return "IO_ERROR";
    case ErrorCode::kVerificationFailed: return "VERIFICATION_FAILED";
  }
  return "UNKNOWN";
}

// All library failures surface as this exception; `code()` identifies the
// failure class and `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gridflow

#endif  // GRIDFLOW_ERROR_HPP_
