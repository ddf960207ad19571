// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ziprerank {

/// Ground-truth set and system ranking for one query. Candidates are opaque
/// indices; `relevant` is kept sorted and deduplicated.
class QueryJudgment {
public:
    /// Throws EmptyRelevantSet if relevant is empty, InvalidArgument if ranked
    /// repeats a candidate.
    QueryJudgment(std::vector<std::size_t> relevant, std::vector<std::size_t> ranked);

    const std::vector<std::size_t>& relevant() const noexcept { return relevant_; }
    const std::vector<std::size_t>& ranked() const noexcept { return ranked_; }

    bool is_relevant(std::size_t candidate) const;

    /// 1-based position of the best-ranked relevant candidate, if any is ranked.
    std::optional<std::size_t> best_relevant_rank() const;

private:
    std::vector<std::size_t> relevant_;
    std::vector<std::size_t> ranked_;
};

enum class FailureLabel { kSuccess, kNearMiss, kModerateMiss, kCatastrophicMiss };

std::string_view failure_label_name(FailureLabel label) noexcept;

struct FailureClass {
    FailureLabel label = FailureLabel::kSuccess;
    std::size_t gt_best_rank = 1;
};

struct Aggregate {
    double micro = 0.0;
    double macro = 0.0;
};

/// Failure behavior over a query set. The miss shares are fractions of the
/// failed queries, not of all queries.
struct FailureBreakdown {
    std::size_t queries = 0;
    std::size_t successes = 0;
    std::size_t near_miss = 0;
    std::size_t moderate_miss = 0;
    std::size_t catastrophic_miss = 0;
    double precision_at_1 = 0.0;
    double fail_fraction = 0.0;
    double near_miss_share = 0.0;
    double moderate_miss_share = 0.0;
    double catastrophic_miss_share = 0.0;
};

using SubsetValues = std::vector<std::pair<std::string, std::vector<double>>>;

double recall_at_k(const QueryJudgment& j, std::size_t k);

/// Micro pools every query; macro averages the per-subset means.
Aggregate aggregate(const SubsetValues& values_by_subset);

double precision_at_1(const QueryJudgment& j);

/// Binary-gain nDCG with 1/log2(p + 1) discount at 1-based position p.
double ndcg_at_k(const QueryJudgment& j, std::size_t k);

/// Mean over queries of the best relevant rank. Throws GroundTruthNotRanked
/// if some query never ranks a relevant candidate.
double mean_rank(std::span<const QueryJudgment> judgments);

FailureClass classify_failure(std::size_t gt_best_rank);

FailureBreakdown failure_breakdown(std::span<const QueryJudgment> judgments);

/// 1-based ranks with ties sharing the mean of the positions they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace ziprerank
