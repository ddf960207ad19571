// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ziprerank/attention.hpp"
#include "ziprerank/error.hpp"
#include "ziprerank/harness.hpp"
#include "ziprerank/listwise.hpp"
#include "ziprerank/parallel.hpp"
#include "ziprerank/pruning.hpp"
#include "ziprerank/rng.hpp"

namespace ziprerank::harness {
namespace {

// Stream tags keep the per-trial seeds of different checks independent.
constexpr std::uint64_t kSandwichStream = 1;
constexpr std::uint64_t kStabilityStream = 2;
constexpr std::uint64_t kPruneErrorStream = 3;
constexpr std::uint64_t kTailGapStream = 4;

std::size_t draw_count(Rng& rng, std::size_t lo, std::size_t hi) {
    return static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
}

struct TrialOutcome {
    bool failed = false;
    bool exercised = true;
    double excess = 0.0;
};

BoundTally tally(std::string name, const std::vector<TrialOutcome>& outcomes) {
    BoundTally t;
    t.name = std::move(name);
    t.trials = outcomes.size();
    for (const auto& o : outcomes) {
        t.failures += o.failed ? 1 : 0;
        t.exercised += o.exercised ? 1 : 0;
        t.max_excess = std::max(t.max_excess, o.excess);
    }
    return t;
}

// Random similarity matrix; column 0 is constant so the upper bound is attained.
TrialOutcome sandwich_trial(std::uint64_t seed, double scale) {
    Rng rng(seed);
    const std::size_t n_query = draw_count(rng, 1, 32);
    const std::size_t n_visual = draw_count(rng, 1, 256);
    std::vector<double> s(n_query * n_visual);
    for (double& x : s) x = rng.uniform(-1.0, 1.0);
    const double constant = rng.uniform(-1.0, 1.0);
    for (std::size_t t = 0; t < n_query; ++t) s[t * n_visual] = constant;
    const SimilarityMatrix sim(n_query, n_visual, std::move(s));

    const auto a = maxsim_scores(sim);
    const auto g = lse_scores(sim);
    const double log_nq = std::log(static_cast<double>(n_query));

    TrialOutcome out;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double below = a[j] - g[j];
        const double above = g[j] - (a[j] + scale * log_nq);
        const double excess = std::max(below, above);
        if (excess > kBoundSlack) {
            out.failed = true;
            out.excess = std::max(out.excess, excess);
        }
    }
    // The all-equal column must sit exactly on the upper bound.
    const double miss = std::abs(g[0] - (a[0] + log_nq));
    if (miss > kBoundSlack) {
        out.failed = true;
        out.excess = std::max(out.excess, miss);
    }
    return out;
}

// Half the trials plant a score margin so the stability condition is met.
TrialOutcome stability_trial(std::uint64_t seed, double scale) {
    Rng rng(seed);
    const std::size_t n_query = rng.bernoulli(0.5) ? draw_count(rng, 1, 4) : draw_count(rng, 1, 32);
    const std::size_t n_visual = draw_count(rng, 2, 128);
    const std::size_t k = draw_count(rng, 1, n_visual - 1);

    std::vector<double> s(n_query * n_visual);
    if (rng.bernoulli(0.5)) {
        std::vector<bool> top(n_visual, false);
        for (std::size_t placed = 0; placed < k;) {
            const auto j = static_cast<std::size_t>(rng.uniform_below(n_visual));
            if (!top[j]) {
                top[j] = true;
                ++placed;
            }
        }
        const double cut = rng.uniform(-0.5, 0.5);
        const double margin = rng.uniform(0.0, 1.0);
        const double top_lo = std::min(1.0, cut + margin / 2);
        const double rest_hi = std::max(-1.0, cut - margin / 2);
        for (std::size_t t = 0; t < n_query; ++t) {
            for (std::size_t j = 0; j < n_visual; ++j) {
                s[t * n_visual + j] = top[j] ? rng.uniform(top_lo, 1.0) : rng.uniform(-1.0, rest_hi);
            }
        }
    } else {
        for (double& x : s) x = rng.uniform(-1.0, 1.0);
    }
    const SimilarityMatrix sim(n_query, n_visual, std::move(s));
    const auto a = maxsim_scores(sim);
    const auto g = lse_scores(sim);
    const auto check = topk_stability_check(a, g, k, n_query);

    TrialOutcome out;
    out.exercised = check.gap > scale * std::log(static_cast<double>(n_query));
    out.failed = out.exercised && !check.sets_equal;
    return out;
}

// A quarter of the trials use the extremal configuration (kept rows at +u,
// dropped rows at -u, all of norm V_max) on which the bound is attained.
TrialOutcome prune_error_trial(std::uint64_t seed, double scale) {
    Rng rng(seed);
    const std::size_t n = draw_count(rng, 1, 64);
    const std::size_t dim = draw_count(rng, 1, 16);
    const double v_max = rng.uniform(0.1, 10.0);
    const double temperature = rng.uniform(0.0, 5.0);

    std::vector<double> logits(n);
    for (double& x : logits) x = temperature * rng.normal();
    const auto alpha = softmax(logits);
    const auto top = static_cast<std::size_t>(std::max_element(logits.begin(), logits.end()) - logits.begin());

    const double keep_p = rng.uniform(0.05, 0.95);
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == top || rng.bernoulli(keep_p)) kept.push_back(j);
    }
    std::vector<bool> is_kept(n, false);
    for (std::size_t j : kept) is_kept[j] = true;

    std::vector<double> values(n * dim);
    if (rng.bernoulli(0.25)) {
        std::vector<double> u(dim);
        for (double& x : u) x = rng.normal();
        double norm = l2_norm(u);
        if (norm == 0.0) {
            u.assign(dim, 0.0);
            u[0] = 1.0;
            norm = 1.0;
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double sign = is_kept[j] ? 1.0 : -1.0;
            for (std::size_t d = 0; d < dim; ++d) values[j * dim + d] = sign * v_max * u[d] / norm;
        }
    } else {
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<double> v(dim);
            for (double& x : v) x = rng.normal();
            const double norm = l2_norm(v);
            const double radius = rng.uniform(0.0, v_max);
            for (std::size_t d = 0; d < dim; ++d) values[j * dim + d] = norm > 0.0 ? radius * v[d] / norm : 0.0;
        }
    }
    const Matrix v(n, dim, std::move(values));

    const auto report = check_pruning_error_bound(alpha, v, kept, 2.0 * scale);
    TrialOutcome out;
    out.failed = !report.holds;
    out.excess = std::max(0.0, report.error_norm - report.bound - kBoundSlack);
    return out;
}

// Mix of Gaussian scores, quantized scores (ties) and the two-level family on
// which the bound is nearly tight.
TrialOutcome tail_gap_trial(std::uint64_t seed, double scale) {
    Rng rng(seed);
    const std::size_t n = draw_count(rng, 2, 256);
    const std::size_t k = draw_count(rng, 1, n - 1);
    std::vector<double> g(n);
    const double family = rng.uniform01();
    if (family < 0.25) {
        const double high = rng.uniform(-5.0, 5.0);
        const double delta = rng.uniform(0.0, 12.0);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = 0; i + 1 < n; ++i) {
            std::swap(order[i], order[i + static_cast<std::size_t>(rng.uniform_below(n - i))]);
        }
        for (std::size_t p = 0; p < n; ++p) g[order[p]] = p < k ? high : high - delta;
    } else {
        const double spread = rng.uniform(0.1, 10.0);
        for (double& x : g) x = spread * rng.normal();
        if (family < 0.5) {
            for (double& x : g) x = std::round(x * 2.0) / 2.0;
        }
    }
    const auto report = tail_gap_bound_check(g, k, scale);
    TrialOutcome out;
    out.failed = !report.holds;
    out.excess = std::max(0.0, report.epsilon - report.bound - kBoundSlack);
    return out;
}

template <typename Trial>
std::vector<TrialOutcome> run_trials(const BoundVerificationOptions& opt, std::uint64_t stream, Trial trial) {
    std::vector<TrialOutcome> outcomes(opt.trials);
    const std::uint64_t base = derive_seed(opt.seed, stream);
    parallel_for(
        opt.trials, [&](std::size_t t) { outcomes[t] = trial(derive_seed(base, t), opt.constant_scale); },
        opt.threads);
    return outcomes;
}

}  // namespace

bool PruningComparison::t2i_dominates() const {
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
        if (rows[i].retention < rows[i + 1].retention) return false;
    }
    return true;
}

PruningComparison run_pruning_comparison(const SyntheticConfig& cfg, const std::vector<double>& keep_ratios,
                                         std::size_t instances, unsigned threads) {
    cfg.validate();
    if (instances < 1) throw Error(ErrorCode::kConfigInvalid, "need at least one instance");
    for (double r : keep_ratios) keep_count(r, 1);

    struct Counts {
        std::size_t planted = 0;
        std::size_t kept_t2i = 0;
        std::size_t kept_random = 0;
        double keep_fraction = 0.0;
        std::size_t images = 0;
    };
    const std::size_t n_ratios = keep_ratios.size();
    std::vector<std::vector<Counts>> per_instance(instances, std::vector<Counts>(n_ratios));

    parallel_for(
        instances,
        [&](std::size_t inst_index) {
            SyntheticConfig inst_cfg = cfg;
            inst_cfg.seed = derive_seed(cfg.seed, inst_index);
            const auto inst = generate_instance(inst_cfg);
            for (std::size_t i = 0; i < inst.images.size(); ++i) {
                const auto& planted = inst.planted[i];
                if (planted.empty()) continue;
                const auto scores = maxsim_scores(similarity_matrix(inst.query, inst.images[i]));
                const std::size_t n_tokens = scores.size();
                for (std::size_t r = 0; r < n_ratios; ++r) {
                    const auto t2i = prune_by_scores(scores, keep_ratios[r]);
                    const auto rnd = random_prune(n_tokens, t2i.keep_count,
                                                  derive_seed(derive_seed(inst_cfg.seed, i), r));
                    auto& c = per_instance[inst_index][r];
                    for (std::size_t pos : planted) {
                        c.kept_t2i += std::binary_search(t2i.kept_indices.begin(), t2i.kept_indices.end(), pos);
                        c.kept_random += std::binary_search(rnd.begin(), rnd.end(), pos);
                    }
                    c.planted += planted.size();
                    c.keep_fraction += static_cast<double>(t2i.keep_count) / static_cast<double>(n_tokens);
                    ++c.images;
                }
            }
        },
        threads);

    PruningComparison out;
    out.instances = instances;
    for (std::size_t r = 0; r < n_ratios; ++r) {
        Counts total;
        for (const auto& inst : per_instance) {
            total.planted += inst[r].planted;
            total.kept_t2i += inst[r].kept_t2i;
            total.kept_random += inst[r].kept_random;
            total.keep_fraction += inst[r].keep_fraction;
            total.images += inst[r].images;
        }
        const double planted = static_cast<double>(total.planted);
        const double mean_keep = total.images ? total.keep_fraction / static_cast<double>(total.images) : 0.0;
        out.rows.push_back({keep_ratios[r], "t2i", total.planted, total.kept_t2i,
                            static_cast<double>(total.kept_t2i) / planted, mean_keep});
        out.rows.push_back({keep_ratios[r], "random", total.planted, total.kept_random,
                            static_cast<double>(total.kept_random) / planted, mean_keep});
    }
    return out;
}

BoundVerification run_bound_verification(const BoundVerificationOptions& options) {
    if (options.trials < 1) throw Error(ErrorCode::kConfigInvalid, "trials must be >= 1");
    if (!(options.constant_scale > 0.0)) throw Error(ErrorCode::kConfigInvalid, "constant_scale must be positive");
    BoundVerification out;
    out.sandwich = tally("max_vs_lse", run_trials(options, kSandwichStream, sandwich_trial));
    out.stability = tally("topk_stability", run_trials(options, kStabilityStream, stability_trial));
    out.prune_error = tally("tail_mass_error", run_trials(options, kPruneErrorStream, prune_error_trial));
    out.tail_gap = tally("tail_gap", run_trials(options, kTailGapStream, tail_gap_trial));
    return out;
}

std::vector<CostSweepRow> run_cost_sweep(const CostSweepTemplate& tmpl, const std::vector<double>& rho_values,
                                         const std::vector<std::size_t>& k_values) {
    if (rho_values.empty() || k_values.empty()) throw Error(ErrorCode::kConfigInvalid, "empty sweep grid");
    tmpl.arch.validate();
    std::vector<CostSweepRow> rows;
    rows.reserve(rho_values.size() * k_values.size());
    for (double rho : rho_values) {
        for (std::size_t k : k_values) {
            WorkloadSpec w;
            w.n_text = tmpl.n_text;
            w.n_query = tmpl.n_query;
            w.k = k;
            w.beta = tmpl.beta;
            w.u_reason = tmpl.u_reason;
            w.rho = rho;
            w.n_vis = k * tmpl.tokens_per_image;
            w.image_token_counts = std::vector<std::size_t>(k, tmpl.tokens_per_image);
            rows.push_back({rho, k, estimate_cost(w, tmpl.arch)});
        }
    }
    return rows;
}

AttentionCorrelation run_attention_correlation(const SyntheticConfig& cfg, const AttentionCorrelationConfig& acfg,
                                               unsigned threads) {
    cfg.validate();
    if (acfg.instances < 1 || acfg.heads < 1 || acfg.positions < 1) {
        throw Error(ErrorCode::kConfigInvalid, "attention correlation counts must be >= 1");
    }
    std::vector<double> rho(acfg.instances);
    parallel_for(
        acfg.instances,
        [&](std::size_t index) {
            SyntheticConfig inst_cfg = cfg;
            inst_cfg.seed = derive_seed(cfg.seed, index);
            const auto inst = generate_instance(inst_cfg);
            const auto scores = maxsim_scores(similarity_matrix(inst.query, inst.images[inst.relevant_image]));

            Rng rng(derive_seed(inst_cfg.seed, 0xa77e));
            std::vector<Matrix> heads;
            heads.reserve(acfg.heads);
            for (std::size_t h = 0; h < acfg.heads; ++h) {
                std::vector<double> data;
                data.reserve(acfg.positions * scores.size());
                for (std::size_t p = 0; p < acfg.positions; ++p) {
                    std::vector<double> logits(scores.size());
                    for (std::size_t j = 0; j < scores.size(); ++j) {
                        logits[j] = acfg.temperature * scores[j] + acfg.noise * rng.normal();
                    }
                    const auto w = softmax(logits);
                    data.insert(data.end(), w.values().begin(), w.values().end());
                }
                heads.emplace_back(acfg.positions, scores.size(), std::move(data));
            }
            const auto mass = attention_mass_per_token(heads, acfg.positions - 1);
            rho[index] = spearman(scores, mass);
        },
        threads);

    AttentionCorrelation out;
    out.instances = acfg.instances;
    out.mean_spearman = std::accumulate(rho.begin(), rho.end(), 0.0) / static_cast<double>(rho.size());
    out.min_spearman = *std::min_element(rho.begin(), rho.end());
    out.max_spearman = *std::max_element(rho.begin(), rho.end());
    return out;
}

std::vector<JudgedSubset> synthesize_judgments(const SyntheticJudgmentConfig& cfg, std::uint64_t seed) {
    if (cfg.subsets.empty() || cfg.queries_per_subset < 1 || cfg.candidates < 1) {
        throw Error(ErrorCode::kConfigInvalid, "synthetic judgments need subsets, queries and candidates");
    }
    std::vector<JudgedSubset> out;
    for (std::size_t s = 0; s < cfg.subsets.size(); ++s) {
        Rng rng(derive_seed(seed, s));
        JudgedSubset subset{cfg.subsets[s], {}};
        for (std::size_t q = 0; q < cfg.queries_per_subset; ++q) {
            const auto relevant = static_cast<std::size_t>(rng.uniform_below(cfg.candidates));
            std::vector<double> logits(cfg.candidates);
            for (double& z : logits) z = rng.normal();
            logits[relevant] += cfg.signal;
            subset.judgments.emplace_back(std::vector<std::size_t>{relevant}, rank_from_logits(logits).order());
        }
        out.push_back(std::move(subset));
    }
    return out;
}

MetricEvaluation evaluate_metrics(const std::vector<JudgedSubset>& subsets, const std::vector<std::size_t>& recall_ks,
                                  std::size_t ndcg_k) {
    if (subsets.empty()) throw Error(ErrorCode::kEmptySubset, "no subsets");
    MetricEvaluation out;
    std::vector<QueryJudgment> all;
    for (const auto& s : subsets) {
        if (s.judgments.empty()) throw Error(ErrorCode::kEmptySubset, "subset '" + s.name + "' has no queries");
        out.subsets.push_back(s.name);
        all.insert(all.end(), s.judgments.begin(), s.judgments.end());
    }

    auto add_row = [&](std::string name, auto&& per_query) {
        SubsetValues values;
        MetricTableRow row{std::move(name), {}, {}};
        for (const auto& s : subsets) {
            std::vector<double> v;
            v.reserve(s.judgments.size());
            for (const auto& j : s.judgments) v.push_back(per_query(j));
            row.per_subset.push_back(std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()));
            values.emplace_back(s.name, std::move(v));
        }
        row.overall = aggregate(values);
        out.rows.push_back(std::move(row));
    };

    for (std::size_t k : recall_ks) {
        add_row("recall@" + std::to_string(k), [k](const QueryJudgment& j) { return recall_at_k(j, k); });
    }
    add_row("p@1", [](const QueryJudgment& j) { return precision_at_1(j); });
    add_row("ndcg@" + std::to_string(ndcg_k), [ndcg_k](const QueryJudgment& j) { return ndcg_at_k(j, ndcg_k); });
    add_row("mean_rank", [](const QueryJudgment& j) { return mean_rank(std::span<const QueryJudgment>(&j, 1)); });
    out.failures = failure_breakdown(all);
    return out;
}

}  // namespace ziprerank::harness
