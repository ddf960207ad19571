// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#include "ziprerank/error.hpp"

namespace ziprerank {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::kZeroNorm: return "ZeroNorm";
        case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
        case ErrorCode::kShapeMismatch: return "ShapeMismatch";
        case ErrorCode::kNonFinite: return "NonFinite";
        case ErrorCode::kEmptyInput: return "EmptyInput";
        case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
        case ErrorCode::kInvalidRatio: return "InvalidRatio";
        case ErrorCode::kKOutOfRange: return "KOutOfRange";
        case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::kAllMassPruned: return "AllMassPruned";
        case ErrorCode::kTooManyCandidates: return "TooManyCandidates";
        case ErrorCode::kLengthMismatch: return "LengthMismatch";
        case ErrorCode::kInvalidPermutation: return "InvalidPermutation";
        case ErrorCode::kInvalidRanking: return "InvalidRanking";
        case ErrorCode::kInvalidGamma: return "InvalidGamma";
        case ErrorCode::kInvalidProbability: return "InvalidProbability";
        case ErrorCode::kInvalidArgument: return "InvalidArgument";
        case ErrorCode::kZeroDenominator: return "ZeroDenominator";
        case ErrorCode::kEmptyRelevantSet: return "EmptyRelevantSet";
        case ErrorCode::kEmptyRanking: return "EmptyRanking";
        case ErrorCode::kEmptySubset: return "EmptySubset";
        case ErrorCode::kGroundTruthNotRanked: return "GroundTruthNotRanked";
        case ErrorCode::kDegenerateConstant: return "DegenerateConstant";
        case ErrorCode::kConfigInvalid: return "ConfigInvalid";
        case ErrorCode::kIo: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

}  // namespace ziprerank
