// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_helpers.hpp"
#include "ziprerank/commands.hpp"
#include "ziprerank/json_io.hpp"

namespace ziprerank {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TEST(JsonIo, MatrixRoundTrip) {
    Rng rng(167);
    const auto m = testutil::random_matrix(rng, 3, 5);
    const json j = m;
    EXPECT_EQ(j.at("rows"), 3);
    EXPECT_EQ(j.at("dim"), 5);
    const auto back = j.get<Matrix>();
    EXPECT_EQ(back, m);
    EXPECT_ERROR_CODE((json{{"rows", 2}, {"dim", 2}, {"data", {1, 2, 3}}}.get<Matrix>()), ErrorCode::kDimensionMismatch);
}

TEST(JsonIo, PruneResultRoundTrip) {
    const PruneResult r{{1, 4, 7}, 3, 0.3, 0.25};
    const json j = r;
    EXPECT_EQ(j.get<PruneResult>(), r);
    const PruneResult no_margin{{0}, 1, 1.0, std::nullopt};
    EXPECT_EQ(json(no_margin).get<PruneResult>(), no_margin);

    json bad = r;
    bad["kept_indices"] = {4, 1, 7};
    EXPECT_ERROR_CODE(bad.get<PruneResult>(), ErrorCode::kConfigInvalid);
    bad = r;
    bad["keep_count"] = 2;
    EXPECT_ERROR_CODE(bad.get<PruneResult>(), ErrorCode::kConfigInvalid);
}

TEST(JsonIo, PermutationRoundTrip) {
    const Permutation p({3, 1, 0, 2});
    EXPECT_EQ(json(p).get<Permutation>(), p);
    EXPECT_ERROR_CODE(json({1, 1}).get<Permutation>(), ErrorCode::kInvalidPermutation);
}

TEST(JsonIo, CostEstimateRecordsMode) {
    WorkloadSpec w;
    w.n_text = 10;
    w.n_vis = 100;
    w.rho = 0.5;
    const json j = estimate_cost(w, ArchParams{});
    EXPECT_EQ(j.at("n_rho_mode"), "approx_ratio");
    EXPECT_TRUE(j.contains("regime_estimates"));
}

TEST(Commands, VerifyBoundsPassesAndRejectsUnknownKeys) {
    const auto result = commands::run_verify_bounds(json{{"trials", 300}, {"seed", 4}}, {});
    EXPECT_TRUE(result.passed);
    EXPECT_TRUE(result.report.contains("tallies"));
    EXPECT_ERROR_CODE(commands::run_verify_bounds(json{{"trails", 300}}, {}), ErrorCode::kConfigInvalid);
    EXPECT_ERROR_CODE(commands::run_verify_bounds(json{{"trials", "many"}}, {}), ErrorCode::kConfigInvalid);
}

TEST(Commands, MutatedConstantFails) {
    const auto result = commands::run_verify_bounds(json{{"trials", 2000}, {"seed", 4}, {"constant_scale", 0.95}}, {});
    EXPECT_FALSE(result.passed);
}

TEST(Commands, CostModelExample) {
    const json cfg = {{"arch", {{"layers", 1}, {"width", 1}, {"c_att", 1}, {"c_ffn", 1}, {"c_dec", 1}, {"c_score", 1}}},
                      {"workload",
                       {{"n_text", 0}, {"n_query", 2}, {"k", 1}, {"beta", 1}, {"u_reason", 0}, {"rho", 0.5},
                        {"image_token_counts", {10}}}}};
    const auto result = commands::run_cost_model(cfg, {});
    EXPECT_EQ(result.report.at("estimate").at("f_zip"), 55.0);
    EXPECT_EQ(result.report.at("estimate").at("n_rho_mode"), "exact_per_image");
    EXPECT_ERROR_CODE(commands::run_cost_model(json::object(), {}), ErrorCode::kConfigInvalid);
}

TEST(Commands, MetricsFromExplicitJudgments) {
    const json cfg = {{"subsets",
                       {{{"name", "X"}, {"judgments", {{{"relevant", {1}}, {"ranked", {1, 0, 2}}}}}},
                        {{"name", "Y"},
                         {"judgments",
                          {{{"relevant", {2}}, {"logits", {0.5, 0.1, 0.3}}}, {{"relevant", {0}}, {"ranked", {0, 1}}}}}}}}};
    const auto result = commands::run_metrics(cfg, {});
    EXPECT_TRUE(result.passed);
    EXPECT_FALSE(result.tables.empty());
    EXPECT_ERROR_CODE(commands::run_metrics(json{{"subsets", json::array()}}, {}), ErrorCode::kConfigInvalid);
}

TEST(Commands, OutputsAreDeterministic) {
    const fs::path base = fs::temp_directory_path() / "ziprerank_io_test";
    fs::remove_all(base);
    const json cfg = {{"instances", 20}, {"keep_ratios", {0.3, 1.0}},
                      {"synthetic", {{"n_images", 3}, {"tokens_min", 16}, {"tokens_max", 32}, {"embed_dim", 16}}},
                      {"attention", {{"instances", 10}}}};
    commands::RunOptions one;
    one.seed = 99;
    one.threads = 1;
    commands::RunOptions many = one;
    many.threads = 4;
    commands::write_outputs(commands::run_simulate(cfg, one), base / "a");
    commands::write_outputs(commands::run_simulate(cfg, many), base / "b");
    EXPECT_EQ(slurp(base / "a" / "report.json"), slurp(base / "b" / "report.json"));
    EXPECT_TRUE(fs::exists(base / "a" / "timing.json"));
    EXPECT_FALSE(fs::is_empty(base / "a" / "tables"));
    fs::remove_all(base);
}

}  // namespace
}  // namespace ziprerank
