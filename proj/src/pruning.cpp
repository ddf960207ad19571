// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#include "ziprerank/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ziprerank/error.hpp"
#include "ziprerank/parallel.hpp"
#include "ziprerank/rng.hpp"

namespace ziprerank {
namespace {

void require_nonempty(const SimilarityMatrix& s) {
    if (s.n_query() == 0 || s.n_visual() == 0) throw Error(ErrorCode::kEmptyMatrix, "similarity matrix is empty");
}

// Indices ordered by descending score, lower index first on ties. Only the
// first `k` positions are guaranteed sorted.
std::vector<std::size_t> rank_prefix(std::span<const double> scores, std::size_t k) {
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto before = [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    };
    const auto middle = idx.begin() + static_cast<std::ptrdiff_t>(std::min(k, idx.size()));
    std::partial_sort(idx.begin(), middle, idx.end(), before);
    return idx;
}

}  // namespace

std::vector<double> maxsim_scores(const SimilarityMatrix& s) {
    require_nonempty(s);
    std::vector<double> out(s.query_row(0).begin(), s.query_row(0).end());
    for (std::size_t t = 1; t < s.n_query(); ++t) {
        const auto row = s.query_row(t);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::max(out[j], row[j]);
    }
    return out;
}

std::vector<double> lse_scores(const SimilarityMatrix& s) {
    require_nonempty(s);
    const auto peak = maxsim_scores(s);
    std::vector<double> sum(s.n_visual(), 0.0);
    for (std::size_t t = 0; t < s.n_query(); ++t) {
        const auto row = s.query_row(t);
        for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += std::exp(row[j] - peak[j]);
    }
    std::vector<double> out(sum.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = peak[j] + std::log(sum[j]);
    return out;
}

std::size_t keep_count(double rho, std::size_t n_tokens) {
    if (!(rho > 0.0 && rho <= 1.0)) {
        throw Error(ErrorCode::kInvalidRatio, "keep ratio " + std::to_string(rho) + " not in (0, 1]");
    }
    if (n_tokens == 0) throw Error(ErrorCode::kInvalidArgument, "keep_count needs at least one token");
    // std::round rounds halves away from zero.
    const auto rounded = static_cast<std::size_t>(std::round(rho * static_cast<double>(n_tokens)));
    return std::clamp<std::size_t>(rounded, 1, n_tokens);
}

std::vector<std::size_t> select_topk_preserve_order(std::span<const double> scores, std::size_t k) {
    if (k < 1 || k > scores.size()) {
        throw Error(ErrorCode::kKOutOfRange,
                    "k=" + std::to_string(k) + " with " + std::to_string(scores.size()) + " scores");
    }
    auto idx = rank_prefix(scores, k);
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

std::vector<std::size_t> random_prune(std::size_t n_tokens, std::size_t k, std::uint64_t seed) {
    if (k < 1 || k > n_tokens) {
        throw Error(ErrorCode::kKOutOfRange, "k=" + std::to_string(k) + " with " + std::to_string(n_tokens) + " tokens");
    }
    std::vector<std::size_t> pool(n_tokens);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_below(n_tokens - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

TopKStability topk_stability_check(std::span<const double> max_sim, std::span<const double> lse, std::size_t k,
                                   std::size_t n_query) {
    if (max_sim.size() != lse.size()) throw Error(ErrorCode::kLengthMismatch, "max_sim and lse lengths differ");
    if (k < 1 || k >= max_sim.size()) {
        throw Error(ErrorCode::kKOutOfRange,
                    "k=" + std::to_string(k) + " needs 1 <= k < " + std::to_string(max_sim.size()));
    }
    if (n_query < 1) throw Error(ErrorCode::kInvalidArgument, "n_query must be positive");

    std::vector<double> sorted(max_sim.begin(), max_sim.end());
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end(),
                     std::greater<>());
    const double kth = sorted[k - 1];
    const double next = *std::max_element(sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end());

    TopKStability out;
    out.gap = kth - next;
    out.guaranteed_stable = out.gap > std::log(static_cast<double>(n_query));
    out.sets_equal = select_topk_preserve_order(max_sim, k) == select_topk_preserve_order(lse, k);
    return out;
}

PruneResult prune_by_scores(std::span<const double> scores, double rho) {
    PruneResult out;
    out.keep_ratio = rho;
    out.keep_count = keep_count(rho, scores.size());
    auto order = rank_prefix(scores, out.keep_count + 1);
    if (out.keep_count < scores.size()) {
        out.margin = scores[order[out.keep_count - 1]] - scores[order[out.keep_count]];
    }
    order.resize(out.keep_count);
    std::sort(order.begin(), order.end());
    out.kept_indices = std::move(order);
    return out;
}

std::vector<PruneResult> prune_images(const EmbeddingMatrix& query, std::span<const EmbeddingMatrix> images,
                                      double rho, unsigned threads) {
    keep_count(rho, 1);  // validates rho before any work is scheduled
    std::vector<PruneResult> out(images.size());
    parallel_for(
        images.size(),
        [&](std::size_t i) { out[i] = prune_by_scores(maxsim_scores(similarity_matrix(query, images[i])), rho); },
        threads);
    return out;
}

}  // namespace ziprerank
