// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "ziprerank/commands.hpp"
#include "ziprerank/error.hpp"

namespace {

struct CommonArgs {
    std::string config;
    std::int64_t seed = -1;
    std::string out = "out";
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "JSON config file (defaults apply when omitted)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", args.seed, "Master seed; overrides the config's \"seed\"")->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", args.out, "Output directory for report.json and tables/");
    cmd->add_option("--threads", args.threads, "Worker threads, 0 = all cores; results do not depend on it");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace ziprerank;

    CLI::App app{"Listwise reranking engine: pruning, scoring, losses, cost model and bound verification"};
    app.require_subcommand(1);

    CommonArgs args;
    auto* verify = app.add_subcommand("verify-bounds", "Monte-Carlo verification of the pruning bounds");
    auto* simulate = app.add_subcommand("simulate", "Planted-relevance pruning comparison and attention correlation");
    auto* cost = app.add_subcommand("cost-model", "FLOPs estimate and optional (rho, k) sweep");
    auto* metrics = app.add_subcommand("metrics", "Recall/nDCG/P@1/mean-rank tables with micro and macro averages");
    for (auto* cmd : {verify, simulate, cost, metrics}) add_common(cmd, args);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto config = commands::load_config(args.config);
        commands::RunOptions opt;
        if (args.seed >= 0) opt.seed = static_cast<std::uint64_t>(args.seed);
        opt.threads = args.threads;

        commands::CommandResult result;
        if (verify->parsed()) {
            result = commands::run_verify_bounds(config, opt);
        } else if (simulate->parsed()) {
            result = commands::run_simulate(config, opt);
        } else if (cost->parsed()) {
            result = commands::run_cost_model(config, opt);
        } else {
            result = commands::run_metrics(config, opt);
        }
        commands::write_outputs(result, args.out);
        std::cout << (result.passed ? "PASS" : "FAIL") << "  report: " << (std::filesystem::path(args.out) / "report.json").string()
                  << '\n';
        return result.passed ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
