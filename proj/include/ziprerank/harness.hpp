// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ziprerank/cost_model.hpp"
#include "ziprerank/linalg.hpp"
#include "ziprerank/metrics.hpp"

namespace ziprerank::harness {

// ---------------------------------------------------------------------------
// Synthetic instances with planted relevance

struct SyntheticConfig {
    std::size_t n_images = 10;
    std::size_t tokens_min = 64;
    std::size_t tokens_max = 256;
    std::size_t embed_dim = 64;
    std::size_t n_query_tokens = 8;
    std::size_t planted_per_image = 1;
    double noise_scale = 0.0;
    /// Plant in every image instead of only the designated relevant one.
    bool plant_all_images = false;
    std::uint64_t seed = 0;

    /// Throws ConfigInvalid.
    void validate() const;
};

struct SyntheticInstance {
    EmbeddingMatrix query;
    std::vector<EmbeddingMatrix> images;
    /// planted[i] lists the planted token indices of image i (ascending);
    /// empty for images without planted tokens.
    std::vector<std::vector<std::size_t>> planted;
    std::size_t relevant_image = 0;
};

/// Query rows and unplanted tokens are i.i.d. standard normal. A planted token
/// is a copy of a random query row plus N(0, noise_scale^2) per coordinate.
SyntheticInstance generate_instance(const SyntheticConfig& cfg);

// ---------------------------------------------------------------------------
// Pruning strategy comparison

struct RetentionRow {
    double ratio = 1.0;
    std::string strategy;  // "t2i" or "random"
    std::size_t planted_total = 0;
    std::size_t planted_kept = 0;
    double retention = 0.0;
    double mean_keep_fraction = 0.0;
};

struct PruningComparison {
    std::size_t instances = 0;
    std::vector<RetentionRow> rows;  // ratio-major, t2i before random

    /// True when t2i retention >= random retention at every ratio.
    bool t2i_dominates() const;
};

PruningComparison run_pruning_comparison(const SyntheticConfig& cfg, const std::vector<double>& keep_ratios,
                                         std::size_t instances, unsigned threads = 0);

// ---------------------------------------------------------------------------
// Bound verification

struct BoundTally {
    std::string name;
    std::size_t trials = 0;
    std::size_t failures = 0;
    /// Trials where the check had something to say (e.g. the stability
    /// margin was met). Equal to `trials` for unconditional checks.
    std::size_t exercised = 0;
    /// Largest amount by which a bound was exceeded, beyond the slack.
    double max_excess = 0.0;

    bool passed() const noexcept { return failures == 0; }
};

struct BoundVerificationOptions {
    std::size_t trials = 10000;
    std::uint64_t seed = 0;
    /// Multiplies every bound constant. 1 is the real bound; values below 1
    /// are a mutation self-test and must produce failures.
    double constant_scale = 1.0;
    unsigned threads = 0;
};

struct BoundVerification {
    BoundTally sandwich;     // max <= lse <= max + ln Nq
    BoundTally stability;    // margin > ln Nq implies equal top-k sets
    BoundTally prune_error;  // ||c - c'|| <= 2 eps V_max
    BoundTally tail_gap;     // eps <= (n-k)/k exp(-delta)

    bool passed() const noexcept {
        return sandwich.passed() && stability.passed() && prune_error.passed() && tail_gap.passed();
    }
};

BoundVerification run_bound_verification(const BoundVerificationOptions& options);

// ---------------------------------------------------------------------------
// Cost sweep

struct CostSweepTemplate {
    ArchParams arch;
    std::size_t n_text = 0;
    std::size_t n_query = 0;
    std::size_t tokens_per_image = 0;
    double beta = 1.0;
    std::size_t u_reason = 0;
};

struct CostSweepRow {
    double rho = 1.0;
    std::size_t k = 1;
    CostEstimate estimate;
};

/// One row per (rho, k); the workload has k images of tokens_per_image tokens.
std::vector<CostSweepRow> run_cost_sweep(const CostSweepTemplate& tmpl, const std::vector<double>& rho_values,
                                         const std::vector<std::size_t>& k_values);

// ---------------------------------------------------------------------------
// Pruning score vs. attention mass

struct AttentionCorrelationConfig {
    std::size_t instances = 200;
    std::size_t heads = 4;
    std::size_t positions = 2;
    /// Attention logits are temperature * maxsim score + noise * N(0, 1).
    double temperature = 5.0;
    double noise = 1.0;
};

struct AttentionCorrelation {
    std::size_t instances = 0;
    double mean_spearman = 0.0;
    double min_spearman = 0.0;
    double max_spearman = 0.0;
};

AttentionCorrelation run_attention_correlation(const SyntheticConfig& cfg, const AttentionCorrelationConfig& acfg,
                                               unsigned threads = 0);

// ---------------------------------------------------------------------------
// Metric evaluation

struct JudgedSubset {
    std::string name;
    std::vector<QueryJudgment> judgments;
};

struct SyntheticJudgmentConfig {
    std::vector<std::string> subsets{"A", "B"};
    std::size_t queries_per_subset = 100;
    std::size_t candidates = 20;
    /// Logit bonus of the relevant candidate over N(0, 1) distractors.
    double signal = 1.5;
};

/// Queries with one relevant candidate, ranked by rank_from_logits over noisy
/// identifier logits.
std::vector<JudgedSubset> synthesize_judgments(const SyntheticJudgmentConfig& cfg, std::uint64_t seed);

struct MetricTableRow {
    std::string metric;
    std::vector<double> per_subset;
    Aggregate overall;
};

struct MetricEvaluation {
    std::vector<std::string> subsets;
    std::vector<MetricTableRow> rows;  // Recall@k rows, then P@1, nDCG@k, mean rank
    FailureBreakdown failures;
};

MetricEvaluation evaluate_metrics(const std::vector<JudgedSubset>& subsets, const std::vector<std::size_t>& recall_ks,
                                  std::size_t ndcg_k);

}  // namespace ziprerank::harness
