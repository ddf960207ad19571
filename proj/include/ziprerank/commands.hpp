// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ziprerank::commands {

/// Everything one CLI subcommand produces. `report` is written to
/// report.json and must depend only on config and seed; timing goes to a
/// separate timing.json.
struct CommandResult {
    nlohmann::json report;
    std::vector<std::pair<std::string, std::string>> tables;  // file stem -> CSV text
    bool passed = true;
    double wall_seconds = 0.0;
};

struct RunOptions {
    std::optional<std::uint64_t> seed;  // overrides the config's "seed"
    unsigned threads = 0;               // 0 = hardware concurrency
};

/// Parses a JSON config file. An empty path yields an empty object (all defaults).
nlohmann::json load_config(const std::filesystem::path& path);

CommandResult run_verify_bounds(const nlohmann::json& config, const RunOptions& opt);
CommandResult run_simulate(const nlohmann::json& config, const RunOptions& opt);
CommandResult run_cost_model(const nlohmann::json& config, const RunOptions& opt);
CommandResult run_metrics(const nlohmann::json& config, const RunOptions& opt);

/// Writes report.json, timing.json and tables/<stem>.csv under out_dir.
void write_outputs(const CommandResult& result, const std::filesystem::path& out_dir);

}  // namespace ziprerank::commands
