// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#include "ziprerank/json_io.hpp"

#include "ziprerank/error.hpp"

namespace ziprerank {
namespace {

template <typename T>
T field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::kConfigInvalid, std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kConfigInvalid, std::string("field '") + key + "': " + e.what());
    }
}

}  // namespace

void to_json(json& j, const Matrix& m) { j = json{{"rows", m.rows()}, {"dim", m.dim()}, {"data", m.data()}}; }

void from_json(const json& j, Matrix& m) {
    m = Matrix(field<std::size_t>(j, "rows"), field<std::size_t>(j, "dim"), field<std::vector<double>>(j, "data"));
}

void to_json(json& j, const PruneResult& r) {
    j = json{{"kept_indices", r.kept_indices},
             {"keep_count", r.keep_count},
             {"keep_ratio", r.keep_ratio},
             {"margin", r.margin ? json(*r.margin) : json(nullptr)}};
}

void from_json(const json& j, PruneResult& r) {
    r.kept_indices = field<std::vector<std::size_t>>(j, "kept_indices");
    r.keep_count = field<std::size_t>(j, "keep_count");
    r.keep_ratio = field<double>(j, "keep_ratio");
    const auto& margin = j.at("margin");
    r.margin = margin.is_null() ? std::nullopt : std::optional<double>(margin.get<double>());
    if (r.keep_count != r.kept_indices.size()) {
        throw Error(ErrorCode::kConfigInvalid, "keep_count disagrees with kept_indices");
    }
    for (std::size_t i = 1; i < r.kept_indices.size(); ++i) {
        if (r.kept_indices[i - 1] >= r.kept_indices[i]) {
            throw Error(ErrorCode::kConfigInvalid, "kept_indices must be strictly ascending");
        }
    }
}

void to_json(json& j, const Permutation& p) { j = p.order(); }

void from_json(const json& j, Permutation& p) {
    if (!j.is_array()) throw Error(ErrorCode::kConfigInvalid, "permutation must be an array");
    p = Permutation(j.get<std::vector<std::size_t>>());
}

void to_json(json& j, const LossValue& v) { j = json{{"value", v.value}, {"gradient", v.gradient}}; }

void to_json(json& j, const PruneErrorReport& r) {
    j = json{{"error_norm", r.error_norm},
             {"tail_mass", r.tail_mass},
             {"v_max", r.v_max},
             {"bound", r.bound},
             {"holds", r.holds}};
}

void to_json(json& j, const TailGapReport& r) {
    j = json{{"epsilon", r.epsilon}, {"delta", r.delta}, {"bound", r.bound}, {"holds", r.holds}};
}

void to_json(json& j, const TopKStability& r) {
    j = json{{"gap", r.gap}, {"guaranteed_stable", r.guaranteed_stable}, {"sets_equal", r.sets_equal}};
}

void to_json(json& j, const CostEstimate& e) {
    j = json{{"f_base", e.f_base},
             {"f_zip", e.f_zip},
             {"speedup", e.speedup},
             {"n_full", e.n_full},
             {"n_rho", e.n_rho},
             {"n_rho_mode", context_mode_name(e.mode)},
             {"u_base", e.u_base},
             {"regime_estimates",
              {{"longcontext_prefill_ratio", e.longcontext_prefill_ratio},
               {"generation_heavy_decode_ratio", e.generation_heavy_decode_ratio}}}};
}

void to_json(json& j, const Aggregate& a) { j = json{{"micro", a.micro}, {"macro", a.macro}}; }

void to_json(json& j, const FailureBreakdown& f) {
    j = json{{"queries", f.queries},
             {"successes", f.successes},
             {"near_miss", f.near_miss},
             {"moderate_miss", f.moderate_miss},
             {"catastrophic_miss", f.catastrophic_miss},
             {"precision_at_1", f.precision_at_1},
             {"fail_fraction", f.fail_fraction},
             {"near_miss_share", f.near_miss_share},
             {"moderate_miss_share", f.moderate_miss_share},
             {"catastrophic_miss_share", f.catastrophic_miss_share}};
}

namespace harness {

void to_json(json& j, const BoundTally& t) {
    j = json{{"name", t.name},
             {"trials", t.trials},
             {"failures", t.failures},
             {"exercised", t.exercised},
             {"max_excess", t.max_excess},
             {"status", t.passed() ? "PASS" : "FAIL"}};
}

void to_json(json& j, const BoundVerification& v) {
    j = json::array({v.sandwich, v.stability, v.prune_error, v.tail_gap});
}

void to_json(json& j, const RetentionRow& r) {
    j = json{{"ratio", r.ratio},
             {"strategy", r.strategy},
             {"planted_total", r.planted_total},
             {"planted_kept", r.planted_kept},
             {"retention", r.retention},
             {"mean_keep_fraction", r.mean_keep_fraction}};
}

void to_json(json& j, const PruningComparison& c) {
    j = json{{"instances", c.instances}, {"rows", c.rows}, {"t2i_dominates_random", c.t2i_dominates()}};
}

void to_json(json& j, const AttentionCorrelation& c) {
    j = json{{"instances", c.instances},
             {"mean_spearman", c.mean_spearman},
             {"min_spearman", c.min_spearman},
             {"max_spearman", c.max_spearman}};
}

void to_json(json& j, const SyntheticConfig& c) {
    j = json{{"n_images", c.n_images},
             {"tokens_min", c.tokens_min},
             {"tokens_max", c.tokens_max},
             {"embed_dim", c.embed_dim},
             {"n_query_tokens", c.n_query_tokens},
             {"planted_per_image", c.planted_per_image},
             {"noise_scale", c.noise_scale},
             {"plant_all_images", c.plant_all_images},
             {"seed", c.seed}};
}

}  // namespace harness
}  // namespace ziprerank
