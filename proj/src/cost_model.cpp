// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#include "ziprerank/cost_model.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "ziprerank/error.hpp"
#include "ziprerank/listwise.hpp"

namespace ziprerank {
namespace {

void require_nonnegative(double x, const char* name) {
    if (!std::isfinite(x) || x < 0.0) throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must be >= 0");
}

}  // namespace

void ArchParams::validate() const {
    if (layers < 1 || width < 1) throw Error(ErrorCode::kInvalidArgument, "layers and width must be positive");
    require_nonnegative(c_att, "c_att");
    require_nonnegative(c_ffn, "c_ffn");
    require_nonnegative(c_dec, "c_dec");
    require_nonnegative(c_score, "c_score");
}

void WorkloadSpec::validate() const {
    if (!(rho > 0.0 && rho <= 1.0)) throw Error(ErrorCode::kInvalidRatio, "keep ratio " + std::to_string(rho));
    require_nonnegative(beta, "beta");
    if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be positive");
    if (image_token_counts) {
        const auto total = std::accumulate(image_token_counts->begin(), image_token_counts->end(), std::size_t{0});
        if (total != n_vis) {
            throw Error(ErrorCode::kInvalidArgument,
                        "image token counts sum to " + std::to_string(total) + ", n_vis is " + std::to_string(n_vis));
        }
    }
}

std::string_view context_mode_name(ContextMode mode) noexcept {
    return mode == ContextMode::kExactPerImage ? "exact_per_image" : "approx_ratio";
}

double prefill_flops(double n, const ArchParams& p) {
    const double d = static_cast<double>(p.width);
    return static_cast<double>(p.layers) * (p.c_att * d * n * n + p.c_ffn * d * d * n);
}

double decode_flops(double n, double u, const ArchParams& p) {
    return u * static_cast<double>(p.layers) * p.c_dec * static_cast<double>(p.width) * n;
}

double total_flops(double n, double u, const ArchParams& p) { return prefill_flops(n, p) + decode_flops(n, u, p); }

double score_flops(double n_query, double n_vis, const ArchParams& p) {
    return p.c_score * static_cast<double>(p.width) * n_query * n_vis;
}

std::size_t baseline_output_tokens(const WorkloadSpec& w) {
    return static_cast<std::size_t>(std::round(w.beta * static_cast<double>(w.k))) + w.u_reason;
}

PrunedContext pruned_context(const WorkloadSpec& w) {
    w.validate();
    if (w.image_token_counts) {
        const auto acc = token_accounting(w.n_text, *w.image_token_counts, std::min(w.n_query, w.n_text), w.rho);
        return {static_cast<double>(acc.n_rho), ContextMode::kExactPerImage};
    }
    return {static_cast<double>(w.n_text) + w.rho * static_cast<double>(w.n_vis), ContextMode::kApproxRatio};
}

double f_base(const WorkloadSpec& w, const ArchParams& p) {
    w.validate();
    p.validate();
    const auto n_full = static_cast<double>(w.n_text + w.n_vis);
    return total_flops(n_full, static_cast<double>(baseline_output_tokens(w)), p);
}

double f_zip(const WorkloadSpec& w, const ArchParams& p) {
    p.validate();
    const double n_rho = pruned_context(w).n_rho;
    return score_flops(static_cast<double>(w.n_query), static_cast<double>(w.n_vis), p) + total_flops(n_rho, 1.0, p);
}

double speedup(const WorkloadSpec& w, const ArchParams& p) {
    const double denom = f_zip(w, p);
    if (denom == 0.0) throw Error(ErrorCode::kZeroDenominator, "pruned cost is zero");
    return f_base(w, p) / denom;
}

double longcontext_prefill_ratio(double rho, double n_text, double n_vis) {
    if (!(rho > 0.0 && rho <= 1.0)) throw Error(ErrorCode::kInvalidRatio, "keep ratio " + std::to_string(rho));
    const double denom = n_text + rho * n_vis;
    if (denom == 0.0) throw Error(ErrorCode::kZeroDenominator, "empty context");
    const double r = (n_text + n_vis) / denom;
    return r * r;
}

double generation_heavy_decode_ratio(const WorkloadSpec& w) {
    const double n_rho = pruned_context(w).n_rho;
    if (n_rho == 0.0) throw Error(ErrorCode::kZeroDenominator, "empty context");
    return static_cast<double>(baseline_output_tokens(w)) * static_cast<double>(w.n_text + w.n_vis) / n_rho;
}

CostEstimate estimate_cost(const WorkloadSpec& w, const ArchParams& p) {
    const auto ctx = pruned_context(w);
    CostEstimate est;
    est.f_base = f_base(w, p);
    est.f_zip = f_zip(w, p);
    est.speedup = speedup(w, p);
    est.n_full = static_cast<double>(w.n_text + w.n_vis);
    est.n_rho = ctx.n_rho;
    est.u_base = baseline_output_tokens(w);
    est.mode = ctx.mode;
    est.longcontext_prefill_ratio =
        longcontext_prefill_ratio(w.rho, static_cast<double>(w.n_text), static_cast<double>(w.n_vis));
    est.generation_heavy_decode_ratio = generation_heavy_decode_ratio(w);
    return est;
}

}  // namespace ziprerank
