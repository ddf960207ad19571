// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ziprerank {

enum class ErrorCode {
    kZeroNorm,
    kDimensionMismatch,
    kShapeMismatch,
    kNonFinite,
    kEmptyInput,
    kEmptyMatrix,
    kInvalidRatio,
    kKOutOfRange,
    kIndexOutOfRange,
    kAllMassPruned,
    kTooManyCandidates,
    kLengthMismatch,
    kInvalidPermutation,
    kInvalidRanking,
    kInvalidGamma,
    kInvalidProbability,
    kInvalidArgument,
    kZeroDenominator,
    kEmptyRelevantSet,
    kEmptyRanking,
    kEmptySubset,
    kGroundTruthNotRanked,
    kDegenerateConstant,
    kConfigInvalid,
    kIo,
};

std::string_view error_code_name(ErrorCode code) noexcept;

/// Every failure in the library is reported through this type; `code()` lets
/// callers and tests distinguish the failure without parsing the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ziprerank
