// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "test_helpers.hpp"
#include "ziprerank/attention.hpp"
#include "ziprerank/losses.hpp"

namespace ziprerank {
namespace {

Permutation random_permutation(Rng& rng, std::size_t m) {
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = m; i > 1; --i) std::swap(order[i - 1], order[rng.uniform_below(i)]);
    return Permutation(std::move(order));
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

TEST(Softplus, StableAtExtremes) {
    EXPECT_NEAR(softplus(0.0), std::log(2.0), 1e-15);
    EXPECT_DOUBLE_EQ(softplus(1000.0), 1000.0);
    EXPECT_GT(softplus(-800.0), -1.0);
    EXPECT_LT(softplus(-800.0), 1e-300);
}

TEST(WeightedRankNet, Examples) {
    const TargetRanking target({1, 2});
    EXPECT_NEAR(weighted_ranknet_loss(std::vector<double>{2, 1}, target).value, 0.10442056250607429, 1e-14);
    EXPECT_NEAR(weighted_ranknet_loss(std::vector<double>{0, 0}, target).value, 0.23104906018664842, 1e-14);
    EXPECT_NEAR(weighted_ranknet_loss(std::vector<double>{10, 0}, target).value, 1.5132966405621548e-05, 1e-18);

    double previous = 1e300;
    for (double s0 = -5; s0 <= 40; s0 += 0.5) {
        const double v = weighted_ranknet_loss(std::vector<double>{s0, 0}, target).value;
        ASSERT_LT(v, previous);
        previous = v;
    }
}

TEST(WeightedRankNet, Errors) {
    EXPECT_ERROR_CODE(TargetRanking({1, 1}), ErrorCode::kInvalidRanking);
    EXPECT_ERROR_CODE(TargetRanking({0, 1}), ErrorCode::kInvalidRanking);
    EXPECT_ERROR_CODE(weighted_ranknet_loss(std::vector<double>{1, 2, 3}, TargetRanking({1, 2})),
                      ErrorCode::kLengthMismatch);
    EXPECT_ERROR_CODE(weighted_ranknet_loss(std::vector<double>{1}, TargetRanking({1})), ErrorCode::kInvalidArgument);
}

TEST(WeightedRankNet, MatchesDirectSumAndProperties) {
    Rng rng(101);
    for (int trial = 0; trial < 500; ++trial) {
        const auto m = static_cast<std::size_t>(rng.uniform_int(2, 20));
        const auto target = TargetRanking::from_order(random_permutation(rng, m));
        const auto s = testutil::random_vector(rng, m, 3.0);
        const auto loss = weighted_ranknet_loss(s, target);
        ASSERT_NEAR(loss.value, oracle::ranknet_direct(s, target.ranks()), 1e-10 * std::max(1.0, loss.value));
        ASSERT_NEAR(sum(loss.gradient), 0.0, 1e-9);

        auto shifted = s;
        const double c = rng.uniform(-50, 50);
        for (double& x : shifted) x += c;
        ASSERT_NEAR(weighted_ranknet_loss(shifted, target).value, loss.value, 1e-9);
    }
}

TEST(WeightedRankNet, GradientMatchesFiniteDifferences) {
    Rng rng(103);
    for (int trial = 0; trial < 50; ++trial) {
        const auto target = TargetRanking::from_order(random_permutation(rng, 5));
        const auto s = testutil::random_vector(rng, 5);
        const LossEvaluator f = [&](std::span<const double> x) { return weighted_ranknet_loss(x, target); };
        ASSERT_LT(finite_difference_gradcheck(f, s, 1e-5), 1e-5);
    }
}

TEST(GeometricTarget, Examples) {
    const auto q = geometric_target(Permutation::identity(3), 0.5).q;
    EXPECT_NEAR(q[0], 4.0 / 7, 1e-15);
    EXPECT_NEAR(q[1], 2.0 / 7, 1e-15);
    EXPECT_NEAR(q[2], 1.0 / 7, 1e-15);

    EXPECT_EQ(geometric_target(Permutation::identity(1), 0.5).q, (std::vector<double>{1.0}));

    const auto q2 = geometric_target(Permutation::identity(2), 0.9).q;
    EXPECT_NEAR(q2[0], 10.0 / 19, 1e-15);
    EXPECT_NEAR(q2[1], 9.0 / 19, 1e-15);

    const auto reordered = geometric_target(Permutation({2, 0, 1}), 0.5).q;
    EXPECT_NEAR(reordered[2], 4.0 / 7, 1e-15);
    EXPECT_NEAR(reordered[0], 2.0 / 7, 1e-15);
    EXPECT_NEAR(reordered[1], 1.0 / 7, 1e-15);

    EXPECT_ERROR_CODE(geometric_target(Permutation::identity(2), 0.0), ErrorCode::kInvalidGamma);
    EXPECT_ERROR_CODE(geometric_target(Permutation::identity(2), 1.0), ErrorCode::kInvalidGamma);
}

TEST(GeometricTarget, SumsToOneAndIsEquivariant) {
    Rng rng(107);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto m = static_cast<std::size_t>(rng.uniform_int(1, 26));
        const double gamma = rng.uniform(0.01, 0.99);
        const auto teacher = random_permutation(rng, m);
        const auto q = geometric_target(teacher, gamma).q;
        ASSERT_NEAR(sum(q), 1.0, 1e-12);
        const auto base = geometric_target(Permutation::identity(m), gamma).q;
        for (std::size_t p = 0; p < m; ++p) ASSERT_DOUBLE_EQ(q[teacher[p]], base[p]);
        for (std::size_t p = 1; p < m; ++p) ASSERT_GT(q[teacher[p - 1]], q[teacher[p]]);
    }
}

TEST(SoftRankLoss, Examples) {
    const std::vector<double> zeros{0, 0, 0};
    EXPECT_NEAR(soft_rank_loss(zeros, std::vector<double>{0.2, 0.5, 0.3}).value, std::log(3.0), 1e-14);
    EXPECT_NEAR(soft_rank_loss(zeros, std::vector<double>{1, 0, 0}).value, std::log(3.0), 1e-14);

    const std::vector<double> s{10, 0, 0};
    const std::vector<double> q{1, 0, 0};
    const auto r = soft_rank_loss(s, q);
    const auto p = softmax(s);
    EXPECT_NEAR(r.gradient[0], p[0] - 1.0, 1e-15);
    EXPECT_LT(r.value, 1e-4);

    const std::vector<double> q2{2.0 / 3, 1.0 / 3};
    const std::vector<double> at_target{std::log(2.0), 0.0};
    EXPECT_NEAR(soft_rank_loss(at_target, q2).value, 0.6365141682948128, 1e-14);

    EXPECT_ERROR_CODE(soft_rank_loss(zeros, std::vector<double>{0.5, 0.5}), ErrorCode::kLengthMismatch);
    EXPECT_ERROR_CODE(soft_rank_loss(std::vector<double>{0, 0}, std::vector<double>{0.7, 0.7}),
                      ErrorCode::kInvalidProbability);
}

TEST(SoftRankLoss, GradientAndGibbsProperties) {
    Rng rng(109);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto m = static_cast<std::size_t>(rng.uniform_int(1, 26));
        const auto s = testutil::random_vector(rng, m, 2.0);
        const auto target = geometric_target(random_permutation(rng, m), rng.uniform(0.05, 0.95));
        const auto r = soft_rank_loss(s, target);
        const auto p = softmax(s);
        double entropy = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            ASSERT_NEAR(r.gradient[i], p[i] - target.q[i], 1e-12);
            entropy -= target.q[i] * std::log(target.q[i]);
        }
        ASSERT_NEAR(sum(r.gradient), 0.0, 1e-12);
        ASSERT_GE(r.value, entropy - 1e-12);

        std::vector<double> matched(m);
        for (std::size_t i = 0; i < m; ++i) matched[i] = std::log(target.q[i]);
        ASSERT_NEAR(soft_rank_loss(matched, target).value, entropy, 1e-12);
    }
}

TEST(SoftRankLoss, GradientMatchesFiniteDifferences) {
    Rng rng(113);
    for (int trial = 0; trial < 50; ++trial) {
        const auto target = geometric_target(random_permutation(rng, 20), 0.5);
        const auto s = testutil::random_vector(rng, 20);
        const LossEvaluator f = [&](std::span<const double> x) { return soft_rank_loss(x, target); };
        ASSERT_LT(finite_difference_gradcheck(f, s, 1e-5), 1e-5);
    }
}

TEST(NllLoss, Examples) {
    EXPECT_EQ(nll_loss(std::vector<double>{1, 1, 1}), 0.0);
    EXPECT_NEAR(nll_loss(std::vector<double>{0.5}), std::log(2.0), 1e-15);
    EXPECT_NEAR(nll_loss(std::vector<double>{0.5, 0.25}), 2.0794415416798357, 1e-14);
    EXPECT_ERROR_CODE(nll_loss(std::vector<double>{0.0}), ErrorCode::kInvalidProbability);
    EXPECT_ERROR_CODE(nll_loss(std::vector<double>{1.5}), ErrorCode::kInvalidProbability);
}

TEST(StageLoss, Examples) {
    const LossValue aux{0.5, {}};
    EXPECT_EQ(stage_loss(1.0, aux, 0.0), 1.0);
    EXPECT_EQ(stage_loss(1.0, aux, 10.0), 6.0);
    EXPECT_EQ(stage_loss(1.0, aux, 1.0), 1.5);
    EXPECT_ERROR_CODE(stage_loss(1.0, aux, -1.0), ErrorCode::kInvalidArgument);
}

TEST(GradCheck, ConstantEvaluatorIsExact) {
    const LossEvaluator constant = [](std::span<const double> x) {
        return LossValue{3.0, std::vector<double>(x.size(), 0.0)};
    };
    EXPECT_EQ(finite_difference_gradcheck(constant, std::vector<double>{1, 2, 3}, 1e-5), 0.0);
    EXPECT_ERROR_CODE(finite_difference_gradcheck(constant, std::vector<double>{1}, 0.1), ErrorCode::kInvalidArgument);
}

TEST(GradCheck, DetectsWrongGradient) {
    const LossEvaluator wrong = [](std::span<const double> x) {
        return LossValue{x[0] * x[0], std::vector<double>{x[0]}};
    };
    EXPECT_GT(finite_difference_gradcheck(wrong, std::vector<double>{2.0}, 1e-5), 0.5);
}

}  // namespace
}  // namespace ziprerank
