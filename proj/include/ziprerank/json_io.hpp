// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// JSON encodings of the library types, found by nlohmann::json through ADL.
//
//   Matrix / EmbeddingMatrix  {"rows": int, "dim": int, "data": [reals]}
//   PruneResult               {"kept_indices": [ints], "keep_count": int,
//                              "keep_ratio": real, "margin": real|null}
//   Permutation               [zero-based indices]
//   LossValue                 {"value": real, "gradient": [reals]}

#include <json.hpp>

#include "ziprerank/attention.hpp"
#include "ziprerank/cost_model.hpp"
#include "ziprerank/harness.hpp"
#include "ziprerank/linalg.hpp"
#include "ziprerank/listwise.hpp"
#include "ziprerank/losses.hpp"
#include "ziprerank/metrics.hpp"
#include "ziprerank/pruning.hpp"

namespace ziprerank {

using json = nlohmann::json;

void to_json(json& j, const Matrix& m);
void from_json(const json& j, Matrix& m);

void to_json(json& j, const PruneResult& r);
void from_json(const json& j, PruneResult& r);

void to_json(json& j, const Permutation& p);
void from_json(const json& j, Permutation& p);

void to_json(json& j, const LossValue& v);
void to_json(json& j, const PruneErrorReport& r);
void to_json(json& j, const TailGapReport& r);
void to_json(json& j, const TopKStability& r);
void to_json(json& j, const CostEstimate& e);
void to_json(json& j, const Aggregate& a);
void to_json(json& j, const FailureBreakdown& f);

namespace harness {
void to_json(json& j, const BoundTally& t);
void to_json(json& j, const BoundVerification& v);
void to_json(json& j, const RetentionRow& r);
void to_json(json& j, const PruningComparison& c);
void to_json(json& j, const AttentionCorrelation& c);
void to_json(json& j, const SyntheticConfig& c);
}  // namespace harness

}  // namespace ziprerank
