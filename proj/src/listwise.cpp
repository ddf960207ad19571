// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#include "ziprerank/listwise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ziprerank/pruning.hpp"

namespace ziprerank {

Permutation::Permutation(std::vector<std::size_t> order) : order_(std::move(order)) {
    std::vector<bool> seen(order_.size(), false);
    for (std::size_t i : order_) {
        if (i >= order_.size() || seen[i]) {
            throw Error(ErrorCode::kInvalidPermutation, "index " + std::to_string(i) + " out of range or repeated");
        }
        seen[i] = true;
    }
}

Permutation Permutation::identity(std::size_t k) {
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    return Permutation(std::move(order));
}

Permutation Permutation::inverse() const {
    std::vector<std::size_t> inv(order_.size());
    for (std::size_t p = 0; p < order_.size(); ++p) inv[order_[p]] = p;
    return Permutation(std::move(inv));
}

std::vector<std::string> assign_identifiers(std::size_t k) {
    if (k == 0) throw Error(ErrorCode::kEmptyInput, "no candidates");
    if (k > kMaxCandidates) {
        throw Error(ErrorCode::kTooManyCandidates, std::to_string(k) + " candidates exceed the single-letter alphabet");
    }
    std::vector<std::string> labels;
    labels.reserve(k);
    for (std::size_t i = 0; i < k; ++i) labels.emplace_back(1, static_cast<char>('A' + i));
    return labels;
}

CandidateList make_candidate_list(std::vector<std::string> ids) {
    CandidateList list;
    list.identifier_tokens = assign_identifiers(ids.size());
    list.ids = std::move(ids);
    return list;
}

Permutation rank_from_logits(std::span<const double> logits) {
    if (logits.empty()) throw Error(ErrorCode::kEmptyInput, "no logits");
    for (double z : logits) {
        if (!std::isfinite(z)) throw Error(ErrorCode::kNonFinite, "identifier logit");
    }
    std::vector<std::size_t> order(logits.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return logits[a] > logits[b]; });
    return Permutation(std::move(order));
}

TokenAccounting token_accounting(std::size_t n_text, std::span<const std::size_t> image_token_counts,
                                 std::size_t n_query, double rho) {
    if (!(rho > 0.0 && rho <= 1.0)) throw Error(ErrorCode::kInvalidRatio, "keep ratio " + std::to_string(rho));
    if (n_query > n_text) throw Error(ErrorCode::kInvalidArgument, "query tokens exceed text tokens");

    TokenAccounting acc{n_text, 0, n_query, rho, n_text};
    for (std::size_t n_i : image_token_counts) {
        acc.n_vis += n_i;
        // An image with no tokens contributes nothing rather than the floor of one.
        if (n_i > 0) acc.n_rho += keep_count(rho, n_i);
    }
    return acc;
}

}  // namespace ziprerank
