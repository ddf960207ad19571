// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ziprerank/listwise.hpp"

namespace ziprerank {

/// Target rank of every candidate, 1 = most relevant.
class TargetRanking {
public:
    /// Throws InvalidRanking unless ranks is a permutation of {1, ..., m}.
    explicit TargetRanking(std::vector<std::size_t> ranks);

    /// Ranks implied by an ordering: the candidate at position p gets rank p + 1.
    static TargetRanking from_order(const Permutation& order);

    std::size_t size() const noexcept { return ranks_.size(); }
    std::size_t operator[](std::size_t i) const noexcept { return ranks_[i]; }
    const std::vector<std::size_t>& ranks() const noexcept { return ranks_; }

private:
    std::vector<std::size_t> ranks_;
};

struct SoftTarget {
    std::vector<double> q;
    double gamma = 0.5;
};

/// Loss value with its gradient with respect to the identifier logits.
struct LossValue {
    double value = 0.0;
    std::vector<double> gradient;
};

using LossEvaluator = std::function<LossValue(std::span<const double>)>;

/// log(1 + exp(x)) without overflow for large |x|.
double softplus(double x) noexcept;

/// Pairwise logistic loss over every pair the target orders, weighted by
/// 1 / (r_i + r_j):  sum_{r_i < r_j} w_ij * log(1 + exp(s_j - s_i)).
LossValue weighted_ranknet_loss(std::span<const double> logits, const TargetRanking& target);

/// Geometric target: the candidate at teacher position k receives gamma^k,
/// normalized over the list.
SoftTarget geometric_target(const Permutation& teacher_order, double gamma);

/// Cross-entropy of softmax(logits) against q; gradient is softmax(logits) - q.
LossValue soft_rank_loss(std::span<const double> logits, std::span<const double> q);
LossValue soft_rank_loss(std::span<const double> logits, const SoftTarget& target);

/// -sum ln p over per-step target probabilities.
double nll_loss(std::span<const double> step_probs);

/// base + lambda * aux.value
double stage_loss(double base, const LossValue& aux, double lambda);

/// Max over coordinates of |analytic - numeric| / max(1, |numeric|), with the
/// numeric gradient from central differences of step epsilon.
double finite_difference_gradcheck(const LossEvaluator& loss, std::span<const double> logits, double epsilon);

}  // namespace ziprerank
