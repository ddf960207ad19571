// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#include "ziprerank/commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "ziprerank/error.hpp"
#include "ziprerank/harness.hpp"
#include "ziprerank/json_io.hpp"

namespace ziprerank::commands {
namespace {

using nlohmann::json;

// Reads an object field by field and rejects keys nobody asked for, so a
// misspelled option fails loudly instead of silently taking its default.
class ObjectReader {
public:
    ObjectReader(json j, std::string where) : j_(std::move(j)), where_(std::move(where)) {
        if (!j_.is_object()) throw Error(ErrorCode::kConfigInvalid, where_ + " must be a JSON object");
    }

    template <typename T>
    T get(const std::string& key, T fallback) {
        seen_.insert(key);
        if (!j_.contains(key)) return fallback;
        return convert<T>(j_.at(key), key);
    }

    template <typename T>
    T require(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key)) throw Error(ErrorCode::kConfigInvalid, where_ + ": missing '" + key + "'");
        return convert<T>(j_.at(key), key);
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.count(key)) throw Error(ErrorCode::kConfigInvalid, where_ + ": unknown key '" + key + "'");
        }
    }

private:
    template <typename T>
    T convert(const json& v, const std::string& key) const {
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw Error(ErrorCode::kConfigInvalid, where_ + "." + key + " must be a boolean");
        } else if constexpr (std::is_unsigned_v<T>) {
            if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
                throw Error(ErrorCode::kConfigInvalid, where_ + "." + key + " must be a nonnegative integer");
            }
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) throw Error(ErrorCode::kConfigInvalid, where_ + "." + key + " must be a number");
        }
        try {
            return v.get<T>();
        } catch (const json::exception& e) {
            throw Error(ErrorCode::kConfigInvalid, where_ + "." + key + ": " + e.what());
        }
    }

    json j_;
    std::string where_;
    std::set<std::string> seen_;
};

std::uint64_t resolve_seed(ObjectReader& r, const RunOptions& opt) {
    const auto from_config = r.get<std::uint64_t>("seed", 0);
    return opt.seed.value_or(from_config);
}

harness::SyntheticConfig parse_synthetic(const json& j, std::uint64_t seed) {
    harness::SyntheticConfig cfg;
    ObjectReader r(j, "synthetic");
    cfg.n_images = r.get("n_images", cfg.n_images);
    cfg.tokens_min = r.get("tokens_min", cfg.tokens_min);
    cfg.tokens_max = r.get("tokens_max", cfg.tokens_max);
    cfg.embed_dim = r.get("embed_dim", cfg.embed_dim);
    cfg.n_query_tokens = r.get("n_query_tokens", cfg.n_query_tokens);
    cfg.planted_per_image = r.get("planted_per_image", cfg.planted_per_image);
    cfg.noise_scale = r.get("noise_scale", cfg.noise_scale);
    cfg.plant_all_images = r.get("plant_all_images", cfg.plant_all_images);
    r.finish();
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

ArchParams parse_arch(const json& j) {
    ArchParams p;
    ObjectReader r(j, "arch");
    p.layers = r.get("layers", p.layers);
    p.width = r.get("width", p.width);
    p.c_att = r.get("c_att", p.c_att);
    p.c_ffn = r.get("c_ffn", p.c_ffn);
    p.c_dec = r.get("c_dec", p.c_dec);
    p.c_score = r.get("c_score", p.c_score);
    r.finish();
    p.validate();
    return p;
}

WorkloadSpec parse_workload(const json& j) {
    WorkloadSpec w;
    ObjectReader r(j, "workload");
    w.n_text = r.get("n_text", w.n_text);
    w.n_query = r.get("n_query", w.n_query);
    w.k = r.get("k", w.k);
    w.beta = r.get("beta", w.beta);
    w.u_reason = r.get("u_reason", w.u_reason);
    w.rho = r.get("rho", w.rho);
    if (r.has("image_token_counts")) {
        w.image_token_counts = r.require<std::vector<std::size_t>>("image_token_counts");
        std::size_t total = 0;
        for (auto n : *w.image_token_counts) total += n;
        w.n_vis = r.get("n_vis", total);
    } else {
        w.n_vis = r.require<std::size_t>("n_vis");
    }
    r.finish();
    try {
        w.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::kConfigInvalid, e.what());
    }
    return w;
}

std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

template <typename Clock = std::chrono::steady_clock>
double seconds_since(typename Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<harness::JudgedSubset> parse_subsets(const json& j) {
    if (!j.is_array() || j.empty()) throw Error(ErrorCode::kConfigInvalid, "subsets must be a nonempty array");
    std::vector<harness::JudgedSubset> out;
    for (const auto& s : j) {
        ObjectReader r(s, "subset");
        harness::JudgedSubset subset{r.require<std::string>("name"), {}};
        const auto& judgments = r.raw("judgments");
        r.finish();
        if (!judgments.is_array()) throw Error(ErrorCode::kConfigInvalid, "judgments must be an array");
        for (const auto& q : judgments) {
            ObjectReader qr(q, "judgment");
            auto relevant = qr.require<std::vector<std::size_t>>("relevant");
            std::vector<std::size_t> ranked;
            if (qr.has("logits")) {
                if (qr.has("ranked")) throw Error(ErrorCode::kConfigInvalid, "judgment has both ranked and logits");
                ranked = rank_from_logits(qr.require<std::vector<double>>("logits")).order();
            } else {
                ranked = qr.require<std::vector<std::size_t>>("ranked");
            }
            qr.finish();
            subset.judgments.emplace_back(std::move(relevant), std::move(ranked));
        }
        out.push_back(std::move(subset));
    }
    return out;
}

}  // namespace

json load_config(const std::filesystem::path& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::kConfigInvalid, path.string() + ": " + e.what());
    }
}

CommandResult run_verify_bounds(const json& config, const RunOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    ObjectReader r(config, "verify-bounds config");
    harness::BoundVerificationOptions o;
    o.trials = r.get("trials", o.trials);
    o.constant_scale = r.get("constant_scale", o.constant_scale);
    o.seed = resolve_seed(r, opt);
    r.finish();
    o.threads = opt.threads;

    const auto result = harness::run_bound_verification(o);

    CommandResult out;
    out.passed = result.passed();
    out.report = {{"command", "verify-bounds"},
                  {"config", {{"trials", o.trials}, {"constant_scale", o.constant_scale}, {"seed", o.seed}}},
                  {"tallies", result},
                  {"status", out.passed ? "PASS" : "FAIL"}};

    std::ostringstream csv;
    csv << "check,trials,failures,exercised,max_excess,status\n";
    for (const auto* t : {&result.sandwich, &result.stability, &result.prune_error, &result.tail_gap}) {
        csv << t->name << ',' << t->trials << ',' << t->failures << ',' << t->exercised << ','
            << format_real(t->max_excess) << ',' << (t->passed() ? "PASS" : "FAIL") << '\n';
    }
    out.tables.emplace_back("bound_verification", csv.str());
    out.wall_seconds = seconds_since(start);
    return out;
}

CommandResult run_simulate(const json& config, const RunOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    ObjectReader r(config, "simulate config");
    const std::uint64_t seed = resolve_seed(r, opt);
    const auto synthetic = parse_synthetic(r.get("synthetic", json::object()), seed);
    const auto ratios = r.get("keep_ratios", std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9, 1.0});
    const auto instances = r.get<std::size_t>("instances", 1000);

    harness::AttentionCorrelationConfig attn;
    {
        ObjectReader a(r.get("attention", json::object()), "attention");
        attn.instances = a.get("instances", attn.instances);
        attn.heads = a.get("heads", attn.heads);
        attn.positions = a.get("positions", attn.positions);
        attn.temperature = a.get("temperature", attn.temperature);
        attn.noise = a.get("noise", attn.noise);
        a.finish();
    }
    r.finish();
    if (ratios.empty()) throw Error(ErrorCode::kConfigInvalid, "keep_ratios is empty");

    const auto comparison = harness::run_pruning_comparison(synthetic, ratios, instances, opt.threads);
    const auto correlation = harness::run_attention_correlation(synthetic, attn, opt.threads);

    CommandResult out;
    out.passed = comparison.t2i_dominates();
    out.report = {{"command", "simulate"},
                  {"config",
                   {{"seed", seed},
                    {"synthetic", synthetic},
                    {"keep_ratios", ratios},
                    {"instances", instances},
                    {"attention",
                     {{"instances", attn.instances},
                      {"heads", attn.heads},
                      {"positions", attn.positions},
                      {"temperature", attn.temperature},
                      {"noise", attn.noise}}}}},
                  {"pruning_comparison", comparison},
                  {"attention_correlation", correlation},
                  {"status", out.passed ? "PASS" : "FAIL"}};

    std::ostringstream csv;
    csv << "keep_ratio,strategy,planted_total,planted_kept,retention,mean_keep_fraction\n";
    for (const auto& row : comparison.rows) {
        csv << format_real(row.ratio) << ',' << row.strategy << ',' << row.planted_total << ',' << row.planted_kept
            << ',' << format_real(row.retention) << ',' << format_real(row.mean_keep_fraction) << '\n';
    }
    out.tables.emplace_back("pruning_comparison", csv.str());
    out.wall_seconds = seconds_since(start);
    return out;
}

CommandResult run_cost_model(const json& config, const RunOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    ObjectReader r(config, "cost-model config");
    resolve_seed(r, opt);  // accepted for a uniform CLI; the cost model is deterministic
    const auto arch = parse_arch(r.get("arch", json::object()));
    const auto workload = parse_workload(r.require<json>("workload"));

    CommandResult out;
    const auto estimate = estimate_cost(workload, arch);
    out.report = {{"command", "cost-model"},
                  {"config", config},
                  {"estimate", estimate},
                  {"f_base", estimate.f_base},
                  {"f_zip", estimate.f_zip},
                  {"speedup", estimate.speedup},
                  {"regime_estimates",
                   {{"longcontext_prefill_ratio", estimate.longcontext_prefill_ratio},
                    {"generation_heavy_decode_ratio", estimate.generation_heavy_decode_ratio}}}};

    if (r.has("sweep")) {
        ObjectReader s(r.raw("sweep"), "sweep");
        harness::CostSweepTemplate tmpl;
        tmpl.arch = arch;
        tmpl.n_text = workload.n_text;
        tmpl.n_query = workload.n_query;
        tmpl.beta = workload.beta;
        tmpl.u_reason = workload.u_reason;
        tmpl.tokens_per_image = s.require<std::size_t>("tokens_per_image");
        const auto rhos = s.get("rho", std::vector<double>{workload.rho});
        const auto ks = s.get("k", std::vector<std::size_t>{workload.k});
        s.finish();

        const auto rows = harness::run_cost_sweep(tmpl, rhos, ks);
        json sweep = json::array();
        std::ostringstream csv;
        csv << "rho,k,n_full,n_rho,u_base,f_base,f_zip,speedup,longcontext_prefill_ratio,"
               "generation_heavy_decode_ratio\n";
        for (const auto& row : rows) {
            const auto& e = row.estimate;
            sweep.push_back({{"rho", row.rho}, {"k", row.k}, {"estimate", e}});
            csv << format_real(row.rho) << ',' << row.k << ',' << format_real(e.n_full) << ',' << format_real(e.n_rho)
                << ',' << e.u_base << ',' << format_real(e.f_base) << ',' << format_real(e.f_zip) << ','
                << format_real(e.speedup) << ',' << format_real(e.longcontext_prefill_ratio) << ','
                << format_real(e.generation_heavy_decode_ratio) << '\n';
        }
        out.report["sweep"] = std::move(sweep);
        out.tables.emplace_back("cost_sweep", csv.str());
    }
    r.finish();
    out.wall_seconds = seconds_since(start);
    return out;
}

CommandResult run_metrics(const json& config, const RunOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    ObjectReader r(config, "metrics config");
    const std::uint64_t seed = resolve_seed(r, opt);
    const auto recall_ks = r.get("recall_ks", std::vector<std::size_t>{1, 3, 5});
    const auto ndcg_k = r.get<std::size_t>("ndcg_k", 5);

    std::vector<harness::JudgedSubset> subsets;
    json config_echo = {{"seed", seed}, {"recall_ks", recall_ks}, {"ndcg_k", ndcg_k}};
    if (r.has("subsets")) {
        subsets = parse_subsets(r.raw("subsets"));
        config_echo["subsets"] = r.raw("subsets").size();
    } else {
        harness::SyntheticJudgmentConfig syn;
        ObjectReader s(r.get("synthetic", json::object()), "synthetic");
        syn.subsets = s.get("subsets", syn.subsets);
        syn.queries_per_subset = s.get("queries_per_subset", syn.queries_per_subset);
        syn.candidates = s.get("candidates", syn.candidates);
        syn.signal = s.get("signal", syn.signal);
        s.finish();
        subsets = harness::synthesize_judgments(syn, seed);
        config_echo["synthetic"] = {{"subsets", syn.subsets},
                                    {"queries_per_subset", syn.queries_per_subset},
                                    {"candidates", syn.candidates},
                                    {"signal", syn.signal}};
    }

    CommandResult out;
    const auto eval = harness::evaluate_metrics(subsets, recall_ks, ndcg_k);
    json rows = json::array();
    std::ostringstream csv;
    csv << "metric";
    for (const auto& name : eval.subsets) csv << ',' << name;
    csv << ",macro,micro\n";
    for (const auto& row : eval.rows) {
        rows.push_back({{"metric", row.metric}, {"per_subset", row.per_subset}, {"overall", row.overall}});
        csv << row.metric;
        for (double v : row.per_subset) csv << ',' << format_real(v);
        csv << ',' << format_real(row.overall.macro) << ',' << format_real(row.overall.micro) << '\n';
    }
    out.tables.emplace_back("metrics", csv.str());
    out.report = {{"command", "metrics"},
                  {"subsets", eval.subsets},
                  {"rows", rows},
                  {"failure_breakdown", eval.failures}};

    // Published per-domain values: each entry is one subset of per-query values.
    if (r.has("values_by_subset")) {
        const auto& v = r.raw("values_by_subset");
        if (!v.is_array()) throw Error(ErrorCode::kConfigInvalid, "values_by_subset must be an array");
        SubsetValues values;
        for (const auto& entry : v) {
            ObjectReader er(entry, "values_by_subset entry");
            values.emplace_back(er.require<std::string>("name"), er.require<std::vector<double>>("values"));
            er.finish();
        }
        out.report["values_by_subset"] = aggregate(values);
        config_echo["values_by_subset"] = v;
    }
    r.finish();
    out.report["config"] = std::move(config_echo);
    out.wall_seconds = seconds_since(start);
    return out;
}

void write_outputs(const CommandResult& result, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir / "tables", ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create " + (out_dir / "tables").string() + ": " + ec.message());

    auto write = [](const fs::path& path, const std::string& text) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw Error(ErrorCode::kIo, "cannot write " + path.string());
        f << text;
    };
    write(out_dir / "report.json", result.report.dump(2) + "\n");
    write(out_dir / "timing.json", json{{"wall_seconds", result.wall_seconds}}.dump(2) + "\n");
    for (const auto& [stem, csv] : result.tables) write(out_dir / "tables" / (stem + ".csv"), csv);
}

}  // namespace ziprerank::commands
