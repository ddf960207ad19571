// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ziprerank/linalg.hpp"

namespace ziprerank {

/// Per-image outcome of query-aware visual token pruning.
struct PruneResult {
    std::vector<std::size_t> kept_indices;  // strictly ascending
    std::size_t keep_count = 0;
    double keep_ratio = 1.0;
    /// Score of the last kept token minus the best dropped one; empty when
    /// every token is kept.
    std::optional<double> margin;

    friend bool operator==(const PruneResult&, const PruneResult&) = default;
};

struct TopKStability {
    double gap = 0.0;
    bool guaranteed_stable = false;
    bool sets_equal = false;
};

/// Column-wise maximum over query rows: the relevance score of each visual token.
std::vector<double> maxsim_scores(const SimilarityMatrix& s);

/// Column-wise log-sum-exp over query rows, max-shifted.
std::vector<double> lse_scores(const SimilarityMatrix& s);

/// max(1, round(rho * n_tokens)), rounding halves away from zero.
std::size_t keep_count(double rho, std::size_t n_tokens);

/// Indices of the k largest scores in ascending index order. Equal scores
/// prefer the lower index.
std::vector<std::size_t> select_topk_preserve_order(std::span<const double> scores, std::size_t k);

/// k distinct indices drawn uniformly from [0, n_tokens) by a partial
/// Fisher-Yates shuffle on Rng(seed), returned ascending.
std::vector<std::size_t> random_prune(std::size_t n_tokens, std::size_t k, std::uint64_t seed);

/// Compares the top-k set under hard max scores with the one under
/// log-sum-exp scores. A gap above ln(n_query) guarantees equality.
TopKStability topk_stability_check(std::span<const double> max_sim, std::span<const double> lse, std::size_t k,
                                   std::size_t n_query);

/// Prunes each image independently against the same query hidden states.
/// `threads` = 0 picks the hardware concurrency; the result does not depend on it.
std::vector<PruneResult> prune_images(const EmbeddingMatrix& query, std::span<const EmbeddingMatrix> images,
                                      double rho, unsigned threads = 1);

/// Pruning of a single image given its precomputed token scores.
PruneResult prune_by_scores(std::span<const double> scores, double rho);

}  // namespace ziprerank
