// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#include "ziprerank/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ziprerank/error.hpp"

namespace ziprerank {
namespace {

double sigmoid(double x) noexcept {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

void require_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) throw Error(ErrorCode::kNonFinite, "logit");
    }
}

}  // namespace

TargetRanking::TargetRanking(std::vector<std::size_t> ranks) : ranks_(std::move(ranks)) {
    std::vector<bool> seen(ranks_.size() + 1, false);
    for (std::size_t r : ranks_) {
        if (r < 1 || r > ranks_.size() || seen[r]) {
            throw Error(ErrorCode::kInvalidRanking, "rank " + std::to_string(r) + " out of range or repeated");
        }
        seen[r] = true;
    }
}

TargetRanking TargetRanking::from_order(const Permutation& order) {
    std::vector<std::size_t> ranks(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) ranks[order[p]] = p + 1;
    return TargetRanking(std::move(ranks));
}

double softplus(double x) noexcept {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

LossValue weighted_ranknet_loss(std::span<const double> logits, const TargetRanking& target) {
    const std::size_t m = logits.size();
    if (m != target.size()) {
        throw Error(ErrorCode::kLengthMismatch,
                    std::to_string(m) + " logits for " + std::to_string(target.size()) + " ranks");
    }
    if (m < 2) throw Error(ErrorCode::kInvalidArgument, "RankNet needs at least two candidates");
    require_finite(logits);

    LossValue out{0.0, std::vector<double>(m, 0.0)};
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (target[i] >= target[j]) continue;
            const double w = 1.0 / static_cast<double>(target[i] + target[j]);
            const double diff = logits[j] - logits[i];
            out.value += w * softplus(diff);
            const double g = w * sigmoid(diff);
            out.gradient[j] += g;
            out.gradient[i] -= g;
        }
    }
    return out;
}

SoftTarget geometric_target(const Permutation& teacher_order, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorCode::kInvalidGamma, "gamma " + std::to_string(gamma));
    const std::size_t m = teacher_order.size();
    if (m == 0) throw Error(ErrorCode::kEmptyInput, "empty teacher order");

    std::vector<double> weight(m);
    double power = 1.0;
    double total = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        weight[k] = power;
        total += power;
        power *= gamma;
    }
    SoftTarget out{std::vector<double>(m), gamma};
    for (std::size_t k = 0; k < m; ++k) out.q[teacher_order[k]] = weight[k] / total;
    return out;
}

LossValue soft_rank_loss(std::span<const double> logits, std::span<const double> q) {
    const std::size_t m = logits.size();
    if (m != q.size()) {
        throw Error(ErrorCode::kLengthMismatch, std::to_string(m) + " logits for " + std::to_string(q.size()) + " targets");
    }
    if (m == 0) throw Error(ErrorCode::kEmptyInput, "no logits");
    require_finite(logits);
    double q_total = 0.0;
    for (double x : q) {
        if (!std::isfinite(x) || x < 0.0) throw Error(ErrorCode::kInvalidProbability, "target entry");
        q_total += x;
    }
    if (std::abs(q_total - 1.0) > 1e-9) throw Error(ErrorCode::kInvalidProbability, "target does not sum to 1");

    const double peak = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double s : logits) z += std::exp(s - peak);
    const double log_z = peak + std::log(z);

    LossValue out{0.0, std::vector<double>(m)};
    for (std::size_t i = 0; i < m; ++i) {
        // -q_i log p_i with log p_i = s_i - logsumexp(s)
        if (q[i] > 0.0) out.value += q[i] * (log_z - logits[i]);
        out.gradient[i] = std::exp(logits[i] - log_z) - q[i];
    }
    return out;
}

LossValue soft_rank_loss(std::span<const double> logits, const SoftTarget& target) {
    return soft_rank_loss(logits, std::span<const double>(target.q));
}

double nll_loss(std::span<const double> step_probs) {
    double total = 0.0;
    for (double p : step_probs) {
        if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::kInvalidProbability, "step probability " + std::to_string(p));
        total -= std::log(p);
    }
    return total;
}

double stage_loss(double base, const LossValue& aux, double lambda) {
    if (!(lambda >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "lambda must be nonnegative");
    return base + lambda * aux.value;
}

double finite_difference_gradcheck(const LossEvaluator& loss, std::span<const double> logits, double epsilon) {
    if (!(epsilon >= 1e-8 && epsilon <= 1e-3)) {
        throw Error(ErrorCode::kInvalidArgument, "epsilon " + std::to_string(epsilon) + " outside [1e-8, 1e-3]");
    }
    const LossValue analytic = loss(logits);
    if (analytic.gradient.size() != logits.size()) {
        throw Error(ErrorCode::kLengthMismatch, "gradient length differs from input length");
    }
    std::vector<double> probe(logits.begin(), logits.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < probe.size(); ++i) {
        const double saved = probe[i];
        probe[i] = saved + epsilon;
        const double up = loss(probe).value;
        probe[i] = saved - epsilon;
        const double down = loss(probe).value;
        probe[i] = saved;
        const double numeric = (up - down) / (2.0 * epsilon);
        worst = std::max(worst, std::abs(analytic.gradient[i] - numeric) / std::max(1.0, std::abs(numeric)));
    }
    return worst;
}

}  // namespace ziprerank
