// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "test_helpers.hpp"
#include "ziprerank/cost_model.hpp"

namespace ziprerank {
namespace {

const ArchParams kUnit{1, 1, 1.0, 1.0, 1.0, 1.0};

ArchParams arch(double att, double ffn, double dec, double score) { return {1, 1, att, ffn, dec, score}; }

TEST(Flops, Examples) {
    EXPECT_EQ(prefill_flops(10, kUnit), 110.0);
    EXPECT_EQ(prefill_flops(0, kUnit), 0.0);
    const auto quad = arch(1, 0, 1, 1);
    EXPECT_EQ(prefill_flops(20, quad), 4 * prefill_flops(10, quad));

    EXPECT_EQ(decode_flops(10, 0, kUnit), 0.0);
    EXPECT_EQ(decode_flops(10, 1, kUnit), 10.0);
    EXPECT_EQ(decode_flops(10, 5, kUnit), 5 * decode_flops(10, 1, kUnit));

    EXPECT_EQ(total_flops(10, 1, kUnit), 120.0);
    EXPECT_EQ(total_flops(10, 0, kUnit), prefill_flops(10, kUnit));

    EXPECT_EQ(score_flops(3, 0, kUnit), 0.0);
    EXPECT_EQ(score_flops(3, 4, kUnit), 12.0);
    EXPECT_EQ(score_flops(6, 4, kUnit), 2 * score_flops(3, 4, kUnit));
    EXPECT_EQ(score_flops(3, 8, kUnit), 2 * score_flops(3, 4, kUnit));
}

TEST(Flops, TotalIsPrefillPlusDecode) {
    Rng rng(127);
    for (int trial = 0; trial < 1000; ++trial) {
        const ArchParams p{static_cast<std::size_t>(rng.uniform_int(1, 80)), static_cast<std::size_t>(rng.uniform_int(1, 8192)),
                           rng.uniform(0, 4), rng.uniform(0, 16), rng.uniform(0, 4), rng.uniform(0, 4)};
        const double n = static_cast<double>(rng.uniform_int(0, 100000));
        const double u = static_cast<double>(rng.uniform_int(0, 2000));
        ASSERT_EQ(total_flops(n, u, p), prefill_flops(n, p) + decode_flops(n, u, p));
    }
}

TEST(CostModel, BaselineExamples) {
    WorkloadSpec w;
    w.n_text = 0;
    w.n_vis = 10;
    w.k = 2;
    w.beta = 0.0;
    EXPECT_EQ(f_base(w, kUnit), prefill_flops(10, kUnit));
    w.beta = 1.0;
    EXPECT_EQ(f_base(w, kUnit), 130.0);
    const double before = f_base(w, kUnit);
    w.u_reason = 100;
    EXPECT_EQ(f_base(w, kUnit) - before, 100.0 * 10.0);
    w.beta = 0.74;
    w.k = 5;
    w.u_reason = 0;
    EXPECT_EQ(baseline_output_tokens(w), 4u);
}

TEST(CostModel, PrunedExamples) {
    WorkloadSpec w;
    w.n_text = 20;
    w.n_vis = 300;
    w.n_query = 4;
    const auto no_score = arch(1, 1, 1, 0);
    EXPECT_EQ(f_zip(w, no_score), prefill_flops(320, no_score) + decode_flops(320, 1, no_score));

    WorkloadSpec one;
    one.n_text = 0;
    one.n_vis = 10;
    one.n_query = 2;
    one.rho = 0.5;
    one.image_token_counts = std::vector<std::size_t>{10};
    EXPECT_EQ(f_zip(one, kUnit), 55.0);
    EXPECT_EQ(pruned_context(one).mode, ContextMode::kExactPerImage);
    one.image_token_counts.reset();
    EXPECT_EQ(f_zip(one, kUnit), 55.0);
    EXPECT_EQ(pruned_context(one).mode, ContextMode::kApproxRatio);
}

TEST(CostModel, ExactModeRoundsPerImage) {
    WorkloadSpec w;
    w.n_text = 10;
    w.n_vis = 10;
    w.n_query = 3;
    w.rho = 0.5;
    w.image_token_counts = std::vector<std::size_t>{4, 6};
    EXPECT_EQ(pruned_context(w).n_rho, 15.0);
    w.image_token_counts = std::vector<std::size_t>{3, 7};
    EXPECT_EQ(pruned_context(w).n_rho, 10.0 + 2.0 + 4.0);
    w.image_token_counts = std::vector<std::size_t>{3, 3};
    EXPECT_ERROR_CODE(pruned_context(w), ErrorCode::kInvalidArgument);
}

TEST(CostModel, Speedup) {
    WorkloadSpec w;
    w.n_text = 50;
    w.n_vis = 500;
    w.beta = 0.0;
    w.u_reason = 1;
    EXPECT_DOUBLE_EQ(speedup(w, arch(1, 1, 1, 0)), 1.0);

    WorkloadSpec gen = w;
    gen.k = 20;
    gen.beta = 1.0;
    gen.u_reason = 0;
    EXPECT_DOUBLE_EQ(speedup(gen, arch(0, 0, 1, 0)), 20.0);
    EXPECT_DOUBLE_EQ(generation_heavy_decode_ratio(gen), 20.0);

    ArchParams zero = arch(0, 0, 0, 0);
    EXPECT_ERROR_CODE(speedup(w, zero), ErrorCode::kZeroDenominator);
}

TEST(CostModel, LongContextRatio) {
    EXPECT_DOUBLE_EQ(longcontext_prefill_ratio(0.5, 0, 100), 4.0);
    EXPECT_DOUBLE_EQ(longcontext_prefill_ratio(1.0, 30, 100), 1.0);
    EXPECT_NEAR(longcontext_prefill_ratio(0.5, 100, 100), 1.7777777777777777, 1e-15);
    EXPECT_ERROR_CODE(longcontext_prefill_ratio(0.0, 1, 1), ErrorCode::kInvalidRatio);
}

TEST(CostModel, LongContextRegimeApproachesInverseSquare) {
    for (const double rho : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        WorkloadSpec w;
        w.n_text = 10;
        w.n_vis = 100000;
        w.n_query = 10;
        w.k = 10;
        w.rho = rho;
        const double s = speedup(w, arch(1, 0, 0, 0));
        EXPECT_NEAR(s * rho * rho, 1.0, 0.05) << "rho " << rho;
    }
}

TEST(CostModel, Invariants) {
    Rng rng(131);
    for (int trial = 0; trial < 1000; ++trial) {
        const ArchParams p{static_cast<std::size_t>(rng.uniform_int(1, 40)), static_cast<std::size_t>(rng.uniform_int(1, 4096)),
                           rng.uniform(0.1, 2), rng.uniform(0, 8), rng.uniform(0.1, 2), rng.uniform(0, 2)};
        WorkloadSpec w;
        w.n_text = static_cast<std::size_t>(rng.uniform_int(16, 2000));
        w.n_vis = static_cast<std::size_t>(rng.uniform_int(0, 20000));
        w.n_query = static_cast<std::size_t>(rng.uniform_int(1, 16));
        w.k = static_cast<std::size_t>(rng.uniform_int(1, 26));
        w.beta = rng.uniform(0.1, 4);
        w.u_reason = static_cast<std::size_t>(rng.uniform_int(0, 500));

        w.rho = 1.0;
        ArchParams no_score = p;
        no_score.c_score = 0.0;
        if (baseline_output_tokens(w) >= 1) ASSERT_GE(speedup(w, no_score), 1.0);

        double previous = -1.0;
        for (double rho = 0.05; rho <= 1.0 + 1e-12; rho += 0.05) {
            w.rho = std::min(rho, 1.0);
            const double cost = f_zip(w, p);
            ASSERT_GE(cost, previous);
            previous = cost;
        }
    }
}

TEST(CostModel, GenerationHeavyRegimeIsExact) {
    Rng rng(137);
    for (int trial = 0; trial < 200; ++trial) {
        WorkloadSpec w;
        w.n_text = static_cast<std::size_t>(rng.uniform_int(1, 1000));
        w.n_vis = static_cast<std::size_t>(rng.uniform_int(0, 5000));
        w.k = static_cast<std::size_t>(rng.uniform_int(1, 26));
        w.beta = rng.uniform(0.5, 3);
        w.u_reason = static_cast<std::size_t>(rng.uniform_int(0, 300));
        const auto p = arch(0, 0, rng.uniform(0.5, 2), 0);
        EXPECT_NEAR(speedup(w, p), static_cast<double>(baseline_output_tokens(w)), 1e-9 * baseline_output_tokens(w));
    }
}

TEST(CostModel, EstimateCollectsEverything) {
    WorkloadSpec w;
    w.n_text = 100;
    w.n_vis = 1000;
    w.n_query = 8;
    w.k = 10;
    w.rho = 0.3;
    const auto est = estimate_cost(w, kUnit);
    EXPECT_EQ(est.n_full, 1100.0);
    EXPECT_DOUBLE_EQ(est.n_rho, 400.0);
    EXPECT_EQ(est.u_base, 10u);
    EXPECT_DOUBLE_EQ(est.speedup, est.f_base / est.f_zip);
    EXPECT_EQ(context_mode_name(est.mode), "approx_ratio");
}

TEST(CostModel, ValidationErrors) {
    WorkloadSpec w;
    w.rho = 1.5;
    EXPECT_ERROR_CODE(w.validate(), ErrorCode::kInvalidRatio);
    w.rho = 0.5;
    w.k = 0;
    EXPECT_ERROR_CODE(w.validate(), ErrorCode::kInvalidArgument);
    ArchParams p = kUnit;
    p.layers = 0;
    EXPECT_ERROR_CODE(p.validate(), ErrorCode::kInvalidArgument);
    p = kUnit;
    p.c_att = -1;
    EXPECT_ERROR_CODE(p.validate(), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace ziprerank
