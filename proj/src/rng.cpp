// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#include "ziprerank/rng.hpp"

#include <cmath>
#include <numbers>

#include "ziprerank/error.hpp"

namespace ziprerank {

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
    if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "uniform_below requires bound > 0");
    // Largest multiple of bound representable in 64 bits; values at or above
    // it are rejected so every residue is equally likely.
    const std::uint64_t limit = std::uint64_t(0) - (std::uint64_t(0) - bound) % bound;
    for (;;) {
        const std::uint64_t x = engine_();
        if (limit == 0 || x < limit) return x % bound;
    }
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw Error(ErrorCode::kInvalidArgument, "uniform_int requires lo <= hi");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    return lo + static_cast<std::int64_t>(uniform_below(span));
}

double Rng::normal() {
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace ziprerank
