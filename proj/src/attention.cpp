// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#include "ziprerank/attention.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ziprerank/error.hpp"
#include "ziprerank/pruning.hpp"

namespace ziprerank {
namespace {

std::vector<bool> kept_mask(std::span<const std::size_t> kept, std::size_t n) {
    if (kept.empty()) throw Error(ErrorCode::kEmptyInput, "kept set is empty");
    std::vector<bool> mask(n, false);
    for (std::size_t j : kept) {
        if (j >= n) throw Error(ErrorCode::kIndexOutOfRange, "kept index " + std::to_string(j));
        if (mask[j]) throw Error(ErrorCode::kInvalidArgument, "kept index " + std::to_string(j) + " repeated");
        mask[j] = true;
    }
    return mask;
}

void require_rows(const AttentionWeights& alpha, const EmbeddingMatrix& values) {
    if (alpha.size() != values.rows()) {
        throw Error(ErrorCode::kDimensionMismatch, std::to_string(alpha.size()) + " weights for " +
                                                       std::to_string(values.rows()) + " value rows");
    }
}

}  // namespace

AttentionWeights::AttentionWeights(std::vector<double> alpha) : alpha_(std::move(alpha)) {
    if (alpha_.empty()) throw Error(ErrorCode::kEmptyInput, "attention weights are empty");
    double total = 0.0;
    for (double a : alpha_) {
        if (!std::isfinite(a) || a < 0.0) throw Error(ErrorCode::kInvalidProbability, "negative or non-finite weight");
        total += a;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw Error(ErrorCode::kInvalidProbability, "weights sum to " + std::to_string(total));
    }
}

AttentionWeights softmax(std::span<const double> scores) {
    if (scores.empty()) throw Error(ErrorCode::kEmptyInput, "softmax of an empty vector");
    for (double x : scores) {
        if (!std::isfinite(x)) throw Error(ErrorCode::kNonFinite, "softmax input");
    }
    const double peak = *std::max_element(scores.begin(), scores.end());
    std::vector<double> out(scores.size());
    double total = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = std::exp(scores[i] - peak);
        total += out[i];
    }
    for (double& x : out) x /= total;
    return AttentionWeights(std::move(out));
}

RealVector attention_output(const AttentionWeights& alpha, const EmbeddingMatrix& values) {
    require_rows(alpha, values);
    RealVector c(values.dim(), 0.0);
    for (std::size_t j = 0; j < values.rows(); ++j) {
        const auto v = values.row(j);
        for (std::size_t d = 0; d < c.size(); ++d) c[d] += alpha[j] * v[d];
    }
    return c;
}

PrunedOutput pruned_attention_output(const AttentionWeights& alpha, const EmbeddingMatrix& values,
                                     std::span<const std::size_t> kept) {
    require_rows(alpha, values);
    const auto mask = kept_mask(kept, values.rows());

    PrunedOutput out;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        if (!mask[j]) out.tail_mass += alpha[j];
    }
    if (out.tail_mass >= kAllMassPrunedThreshold) {
        throw Error(ErrorCode::kAllMassPruned, "tail mass " + std::to_string(out.tail_mass));
    }
    const double renorm = 1.0 - out.tail_mass;
    out.c_prime.assign(values.dim(), 0.0);
    for (std::size_t j = 0; j < values.rows(); ++j) {
        if (!mask[j]) continue;
        const double w = alpha[j] / renorm;
        const auto v = values.row(j);
        for (std::size_t d = 0; d < out.c_prime.size(); ++d) out.c_prime[d] += w * v[d];
    }
    return out;
}

PruneErrorReport check_pruning_error_bound(const AttentionWeights& alpha, const EmbeddingMatrix& values,
                                           std::span<const std::size_t> kept, double bound_constant) {
    const auto full = attention_output(alpha, values);
    const auto pruned = pruned_attention_output(alpha, values, kept);

    RealVector diff(full.size());
    for (std::size_t d = 0; d < diff.size(); ++d) diff[d] = full[d] - pruned.c_prime[d];

    PruneErrorReport report;
    report.error_norm = l2_norm(diff);
    report.tail_mass = pruned.tail_mass;
    for (std::size_t j = 0; j < values.rows(); ++j) report.v_max = std::max(report.v_max, l2_norm(values.row(j)));
    report.bound = bound_constant * report.tail_mass * report.v_max;
    report.holds = report.error_norm <= report.bound + kBoundSlack;
    return report;
}

TailGapReport tail_gap_bound_check(std::span<const double> g_scores, std::size_t k, double scale) {
    const std::size_t n = g_scores.size();
    if (k < 1 || k >= n) {
        throw Error(ErrorCode::kKOutOfRange, "k=" + std::to_string(k) + " needs 1 <= k < " + std::to_string(n));
    }
    const auto alpha = softmax(g_scores);
    const auto top = select_topk_preserve_order(g_scores, k);
    std::vector<bool> in_top(n, false);
    for (std::size_t j : top) in_top[j] = true;

    TailGapReport report;
    double lowest_kept = g_scores[top.front()];
    double highest_dropped = -HUGE_VAL;
    for (std::size_t j = 0; j < n; ++j) {
        if (in_top[j]) {
            lowest_kept = std::min(lowest_kept, g_scores[j]);
        } else {
            report.epsilon += alpha[j];
            highest_dropped = std::max(highest_dropped, g_scores[j]);
        }
    }
    report.delta = lowest_kept - highest_dropped;
    report.bound = scale * (static_cast<double>(n - k) / static_cast<double>(k)) * std::exp(-report.delta);
    report.holds = report.epsilon <= report.bound + kBoundSlack;
    return report;
}

std::vector<double> attention_mass_per_token(std::span<const Matrix> per_head_attention, std::size_t position) {
    if (per_head_attention.empty()) throw Error(ErrorCode::kEmptyInput, "no attention heads");
    const auto& first = per_head_attention.front();
    for (const auto& head : per_head_attention) {
        if (head.rows() != first.rows() || head.cols() != first.cols()) {
            throw Error(ErrorCode::kShapeMismatch, "attention heads differ in shape");
        }
    }
    if (position >= first.rows()) throw Error(ErrorCode::kIndexOutOfRange, "position " + std::to_string(position));

    std::vector<double> mass(first.cols(), 0.0);
    for (const auto& head : per_head_attention) {
        const auto row = head.row(position);
        for (std::size_t j = 0; j < mass.size(); ++j) mass[j] += row[j];
    }
    const auto heads = static_cast<double>(per_head_attention.size());
    for (double& m : mass) m /= heads;
    return mass;
}

}  // namespace ziprerank
