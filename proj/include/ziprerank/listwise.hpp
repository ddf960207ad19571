// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ziprerank/error.hpp"

namespace ziprerank {

inline constexpr std::size_t kMaxCandidates = 26;

/// A bijection on {0, ..., k-1}. order()[p] is the candidate placed at output
/// position p.
class Permutation {
public:
    Permutation() = default;
    /// Throws InvalidPermutation unless `order` hits every index exactly once.
    explicit Permutation(std::vector<std::size_t> order);

    static Permutation identity(std::size_t k);

    std::size_t size() const noexcept { return order_.size(); }
    std::size_t operator[](std::size_t position) const noexcept { return order_[position]; }
    const std::vector<std::size_t>& order() const noexcept { return order_; }

    Permutation inverse() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<std::size_t> order_;
};

struct CandidateList {
    std::vector<std::string> ids;
    std::vector<std::string> identifier_tokens;

    std::size_t k() const noexcept { return ids.size(); }
};

struct TokenAccounting {
    std::size_t n_text = 0;
    std::size_t n_vis = 0;
    std::size_t n_query = 0;
    double rho = 1.0;
    std::size_t n_rho = 0;
};

/// The first k uppercase Latin letters. Throws TooManyCandidates past 26.
std::vector<std::string> assign_identifiers(std::size_t k);

CandidateList make_candidate_list(std::vector<std::string> ids);

/// Descending argsort of identifier logits. Equal logits keep the incoming
/// (retriever) order.
Permutation rank_from_logits(std::span<const double> logits);

template <typename T>
std::vector<T> apply_permutation(std::span<const T> items, const Permutation& pi) {
    if (items.size() != pi.size()) {
        throw Error(ErrorCode::kLengthMismatch,
                    std::to_string(items.size()) + " items for a permutation of " + std::to_string(pi.size()));
    }
    std::vector<T> out;
    out.reserve(items.size());
    for (std::size_t p = 0; p < pi.size(); ++p) out.push_back(items[pi[p]]);
    return out;
}

template <typename T>
std::vector<T> apply_permutation(const std::vector<T>& items, const Permutation& pi) {
    return apply_permutation(std::span<const T>(items), pi);
}

TokenAccounting token_accounting(std::size_t n_text, std::span<const std::size_t> image_token_counts,
                                 std::size_t n_query, double rho);

}  // namespace ziprerank
