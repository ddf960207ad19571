// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#include "ziprerank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ziprerank/error.hpp"

namespace ziprerank {

QueryJudgment::QueryJudgment(std::vector<std::size_t> relevant, std::vector<std::size_t> ranked)
    : relevant_(std::move(relevant)), ranked_(std::move(ranked)) {
    if (relevant_.empty()) throw Error(ErrorCode::kEmptyRelevantSet, "query has no relevant candidates");
    std::sort(relevant_.begin(), relevant_.end());
    relevant_.erase(std::unique(relevant_.begin(), relevant_.end()), relevant_.end());

    auto sorted = ranked_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error(ErrorCode::kInvalidArgument, "ranked list repeats a candidate");
    }
}

bool QueryJudgment::is_relevant(std::size_t candidate) const {
    return std::binary_search(relevant_.begin(), relevant_.end(), candidate);
}

std::optional<std::size_t> QueryJudgment::best_relevant_rank() const {
    for (std::size_t p = 0; p < ranked_.size(); ++p) {
        if (is_relevant(ranked_[p])) return p + 1;
    }
    return std::nullopt;
}

std::string_view failure_label_name(FailureLabel label) noexcept {
    switch (label) {
        case FailureLabel::kSuccess: return "success";
        case FailureLabel::kNearMiss: return "near_miss";
        case FailureLabel::kModerateMiss: return "moderate_miss";
        case FailureLabel::kCatastrophicMiss: return "catastrophic_miss";
    }
    return "unknown";
}

double recall_at_k(const QueryJudgment& j, std::size_t k) {
    if (k < 1) throw Error(ErrorCode::kKOutOfRange, "recall cutoff must be positive");
    const std::size_t depth = std::min(k, j.ranked().size());
    std::size_t hits = 0;
    for (std::size_t p = 0; p < depth; ++p) hits += j.is_relevant(j.ranked()[p]) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(j.relevant().size());
}

Aggregate aggregate(const SubsetValues& values_by_subset) {
    if (values_by_subset.empty()) throw Error(ErrorCode::kEmptySubset, "no subsets");
    double pooled = 0.0;
    std::size_t count = 0;
    double mean_of_means = 0.0;
    for (const auto& [name, values] : values_by_subset) {
        if (values.empty()) throw Error(ErrorCode::kEmptySubset, "subset '" + name + "' has no queries");
        const double sum = std::accumulate(values.begin(), values.end(), 0.0);
        pooled += sum;
        count += values.size();
        mean_of_means += sum / static_cast<double>(values.size());
    }
    return {pooled / static_cast<double>(count), mean_of_means / static_cast<double>(values_by_subset.size())};
}

double precision_at_1(const QueryJudgment& j) {
    if (j.ranked().empty()) throw Error(ErrorCode::kEmptyRanking, "nothing ranked");
    return j.is_relevant(j.ranked().front()) ? 1.0 : 0.0;
}

double ndcg_at_k(const QueryJudgment& j, std::size_t k) {
    if (k < 1) throw Error(ErrorCode::kKOutOfRange, "nDCG cutoff must be positive");
    auto discount = [](std::size_t position) { return 1.0 / std::log2(static_cast<double>(position) + 1.0); };
    double dcg = 0.0;
    const std::size_t depth = std::min(k, j.ranked().size());
    for (std::size_t p = 0; p < depth; ++p) {
        if (j.is_relevant(j.ranked()[p])) dcg += discount(p + 1);
    }
    double ideal = 0.0;
    const std::size_t ideal_depth = std::min(k, j.relevant().size());
    for (std::size_t p = 1; p <= ideal_depth; ++p) ideal += discount(p);
    return dcg / ideal;
}

double mean_rank(std::span<const QueryJudgment> judgments) {
    if (judgments.empty()) throw Error(ErrorCode::kEmptyInput, "no judgments");
    double total = 0.0;
    for (const auto& j : judgments) {
        const auto best = j.best_relevant_rank();
        if (!best) throw Error(ErrorCode::kGroundTruthNotRanked, "a query never ranks its ground truth");
        total += static_cast<double>(*best);
    }
    return total / static_cast<double>(judgments.size());
}

FailureClass classify_failure(std::size_t gt_best_rank) {
    if (gt_best_rank < 1) throw Error(ErrorCode::kInvalidArgument, "ranks are 1-based");
    FailureLabel label = FailureLabel::kCatastrophicMiss;
    if (gt_best_rank == 1) {
        label = FailureLabel::kSuccess;
    } else if (gt_best_rank <= 3) {
        label = FailureLabel::kNearMiss;
    } else if (gt_best_rank <= 5) {
        label = FailureLabel::kModerateMiss;
    }
    return {label, gt_best_rank};
}

FailureBreakdown failure_breakdown(std::span<const QueryJudgment> judgments) {
    if (judgments.empty()) throw Error(ErrorCode::kEmptyInput, "no judgments");
    FailureBreakdown out;
    out.queries = judgments.size();
    for (const auto& j : judgments) {
        const auto best = j.best_relevant_rank();
        // A ground truth that is never ranked sits just past the end of the list.
        const auto cls = classify_failure(best ? *best : j.ranked().size() + 1);
        switch (cls.label) {
            case FailureLabel::kSuccess: ++out.successes; break;
            case FailureLabel::kNearMiss: ++out.near_miss; break;
            case FailureLabel::kModerateMiss: ++out.moderate_miss; break;
            case FailureLabel::kCatastrophicMiss: ++out.catastrophic_miss; break;
        }
    }
    const auto n = static_cast<double>(out.queries);
    const auto failures = static_cast<double>(out.queries - out.successes);
    out.precision_at_1 = static_cast<double>(out.successes) / n;
    out.fail_fraction = failures / n;
    if (failures > 0) {
        out.near_miss_share = static_cast<double>(out.near_miss) / failures;
        out.moderate_miss_share = static_cast<double>(out.moderate_miss) / failures;
        out.catastrophic_miss_share = static_cast<double>(out.catastrophic_miss) / failures;
    }
    return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(values.size());
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t end = start + 1;
        while (end < order.size() && values[order[end]] == values[order[start]]) ++end;
        // positions start..end-1 (0-based) share the mean 1-based rank
        const double shared = 0.5 * static_cast<double>(start + end + 1);
        for (std::size_t p = start; p < end; ++p) ranks[order[p]] = shared;
        start = end;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorCode::kLengthMismatch, "spearman inputs differ in length");
    if (x.size() < 2) throw Error(ErrorCode::kInvalidArgument, "spearman needs at least two points");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw Error(ErrorCode::kNonFinite, "spearman input");
    }
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double mean = 0.5 * static_cast<double>(x.size() + 1);  // mean rank is fixed under averaging
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::kDegenerateConstant, "an input is constant");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace ziprerank
