// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace ziprerank {

// FLOPs model of a decoder-only transformer reranker.
//
//   prefill(n)    = L * (c_att * d * n^2 + c_ffn * d^2 * n)
//   decode(n, u)  = u * L * c_dec * d * n          (KV-cached)
//   score(Nq, V)  = c_score * d * Nq * V           (query/visual cosine scoring)
//
//   baseline: prefill(n_full) + decode(n_full, round(beta * k) + u_reason)
//   pruned:   score(Nq, n_vis) + prefill(n_rho) + decode(n_rho, 1)
//
// The scoring term is an upper-bound proxy; it is evaluated here as an equality.

struct ArchParams {
    std::size_t layers = 1;
    std::size_t width = 1;
    double c_att = 1.0;
    double c_ffn = 1.0;
    double c_dec = 1.0;
    double c_score = 1.0;

    /// Throws InvalidArgument unless layers, width >= 1 and constants finite, >= 0.
    void validate() const;
};

struct WorkloadSpec {
    std::size_t n_text = 0;
    std::size_t n_vis = 0;
    std::size_t n_query = 0;
    std::size_t k = 1;
    double beta = 1.0;
    std::size_t u_reason = 0;
    double rho = 1.0;
    /// Per-image token counts. When present they must sum to n_vis and the
    /// pruned context length uses exact per-image keep counts.
    std::optional<std::vector<std::size_t>> image_token_counts;

    void validate() const;
};

enum class ContextMode { kExactPerImage, kApproxRatio };

std::string_view context_mode_name(ContextMode mode) noexcept;

struct PrunedContext {
    double n_rho = 0.0;
    ContextMode mode = ContextMode::kApproxRatio;
};

struct CostEstimate {
    double f_base = 0.0;
    double f_zip = 0.0;
    double speedup = 0.0;
    double n_full = 0.0;
    double n_rho = 0.0;
    std::size_t u_base = 0;
    ContextMode mode = ContextMode::kApproxRatio;
    double longcontext_prefill_ratio = 0.0;
    double generation_heavy_decode_ratio = 0.0;
};

double prefill_flops(double n, const ArchParams& p);
double decode_flops(double n, double u, const ArchParams& p);
double total_flops(double n, double u, const ArchParams& p);
double score_flops(double n_query, double n_vis, const ArchParams& p);

/// round(beta * k) + u_reason
std::size_t baseline_output_tokens(const WorkloadSpec& w);
PrunedContext pruned_context(const WorkloadSpec& w);

double f_base(const WorkloadSpec& w, const ArchParams& p);
double f_zip(const WorkloadSpec& w, const ArchParams& p);

/// f_base / f_zip; throws ZeroDenominator when f_zip is zero.
double speedup(const WorkloadSpec& w, const ArchParams& p);

/// ((n_text + n_vis) / (n_text + rho * n_vis))^2, the attention-dominated
/// prefill ratio.
double longcontext_prefill_ratio(double rho, double n_text, double n_vis);

/// u_base * n_full / n_rho, the decode-dominated ratio.
double generation_heavy_decode_ratio(const WorkloadSpec& w);

CostEstimate estimate_cost(const WorkloadSpec& w, const ArchParams& p);

}  // namespace ziprerank
