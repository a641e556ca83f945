//
// Copyright 2026 The privsel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace privsel {

enum class ErrorCode {
  kEmptyOutcomeSet,
  kNonFiniteScore,
  kNonPositiveEpsilon,
  kNonPositiveSensitivity,
  kDuplicateLabel,
  kLengthMismatch,
  kEmptyPairList,
  kLabelMismatch,
  kInvalidNoiseParameter,
  kNeedAtLeastTwoOutcomes,
  kEmptySequence,
  kTooManyOutcomesForEnumeration,
  kQuadratureNonConvergence,
  kAllCategoriesMerged,
  kInvalidArgument,
  kPairExceedsSensitivity,
  kUnsupportedOracle,
  kParseError,
  kInternalInvariant,
};

constexpr std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyOutcomeSet: return "EmptyOutcomeSet";
    case ErrorCode::kNonFiniteScore: return "NonFiniteScore";
    case ErrorCode::kNonPositiveEpsilon: return "NonPositiveEpsilon";
    case ErrorCode::kNonPositiveSensitivity: return "NonPositiveSensitivity";
    case ErrorCode::kDuplicateLabel: return "DuplicateLabel";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyPairList: return "EmptyPairList";
    case ErrorCode::kLabelMismatch: return "LabelMismatch";
    case ErrorCode::kInvalidNoiseParameter: return "InvalidNoiseParameter";
    case ErrorCode::kNeedAtLeastTwoOutcomes: return "NeedAtLeastTwoOutcomes";
    case ErrorCode::kEmptySequence: return "EmptySequence";
    case ErrorCode::kTooManyOutcomesForEnumeration:
      return "TooManyOutcomesForEnumeration";
    case ErrorCode::kQuadratureNonConvergence:
      return "QuadratureNonConvergence";
    case ErrorCode::kAllCategoriesMerged: return "AllCategoriesMerged";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kPairExceedsSensitivity: return "PairExceedsSensitivity";
    case ErrorCode::kUnsupportedOracle: return "UnsupportedOracle";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInternalInvariant: return "InternalInvariant";
  }
  return "Unknown";
}

// All library failures are reported through this exception. what() starts
// with the error code name so callers (and the CLI) can surface it verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace privsel
