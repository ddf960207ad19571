// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ziprerank/linalg.hpp"

namespace ziprerank {

/// A point on the probability simplex: nonnegative weights summing to one.
class AttentionWeights {
public:
    /// Throws InvalidProbability unless entries are >= 0 and sum to 1 within 1e-9.
    explicit AttentionWeights(std::vector<double> alpha);

    std::size_t size() const noexcept { return alpha_.size(); }
    double operator[](std::size_t i) const noexcept { return alpha_[i]; }
    const std::vector<double>& values() const noexcept { return alpha_; }

private:
    std::vector<double> alpha_;
};

struct PrunedOutput {
    RealVector c_prime;
    double tail_mass = 0.0;
};

struct PruneErrorReport {
    double error_norm = 0.0;
    double tail_mass = 0.0;
    double v_max = 0.0;
    double bound = 0.0;
    bool holds = false;
};

struct TailGapReport {
    double epsilon = 0.0;
    double delta = 0.0;
    double bound = 0.0;
    bool holds = false;
};

inline constexpr double kBoundSlack = 1e-9;
inline constexpr double kAllMassPrunedThreshold = 1.0 - 1e-12;

AttentionWeights softmax(std::span<const double> scores);

/// Sum of alpha_j * V_j over all rows.
RealVector attention_output(const AttentionWeights& alpha, const EmbeddingMatrix& values);

/// Attention output restricted to `kept` with the surviving weights rescaled
/// by 1 / (1 - eps), where eps is the mass on the dropped rows.
PrunedOutput pruned_attention_output(const AttentionWeights& alpha, const EmbeddingMatrix& values,
                                     std::span<const std::size_t> kept);

/// Measures ||c - c'|| against the tail-mass bound constant * eps * V_max.
/// `bound_constant` is 2 for the real bound; other values exist for mutation
/// self-tests of the verification harness.
PruneErrorReport check_pruning_error_bound(const AttentionWeights& alpha, const EmbeddingMatrix& values,
                                           std::span<const std::size_t> kept, double bound_constant = 2.0);

/// With S the top-k set of g, compares the softmax tail mass outside S with
/// scale * ((n - k) / k) * exp(-(g_(k) - g_(k+1))).
TailGapReport tail_gap_bound_check(std::span<const double> g_scores, std::size_t k, double scale = 1.0);

/// Head-averaged attention row at `position` across per-head attention maps.
std::vector<double> attention_mass_per_token(std::span<const Matrix> per_head_attention, std::size_t position);

}  // namespace ziprerank
