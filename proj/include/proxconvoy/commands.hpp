#pragma once

#include "proxconvoy/convoy.hpp"
#include "proxconvoy/group_discovery.hpp"
#include "proxconvoy/rules.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace proxconvoy::cli {

namespace fs = std::filesystem;

// Every command writes data to `out`, diagnostics to `err`, and returns the
// process exit status: 0 on success, 1 on any error.

struct simulate_options {
    std::optional<fs::path> scenario;
    std::optional<std::string> builtin; // "corridor" or "fig4"
    fs::path out_dir = ".";
    std::optional<std::uint64_t> seed;
};

/// Writes trajectories.jsonl, proximity.jsonl and ground_truth.jsonl.
int cmd_simulate(const simulate_options& opts, std::ostream& out, std::ostream& err);

struct ingest_options {
    std::vector<fs::path> inputs;
    fs::path store;
};

/// Validates the inputs and merges them into the store file, which is
/// rewritten in canonical (t, device) order.
int cmd_ingest(const ingest_options& opts, std::ostream& out, std::ostream& err);

struct query_group_options {
    fs::path log;
    std::string device;
    std::string t0 = "latest"; // seconds, or "latest"
    group_query_params params;
};

int cmd_query_group(const query_group_options& opts, std::ostream& out, std::ostream& err);

struct eval_rules_options {
    fs::path log;
    fs::path rules;
    std::string device;
    std::string t0 = "latest";
    double session_gap = 1800.0;
    double utc_offset = 0.0;
    engine_config engine;
};

/// Prints one JSON line {"rule":..,"content":..} per fired rule.
int cmd_eval_rules(const eval_rules_options& opts, std::ostream& out, std::ostream& err);

struct convoy_baseline_options {
    fs::path trajectories;
    convoy_params params;
};

int cmd_convoy_baseline(const convoy_baseline_options& opts, std::ostream& out,
                        std::ostream& err);

struct compare_options {
    std::optional<fs::path> scenario;
    std::optional<std::string> builtin;
    std::optional<std::uint64_t> seed;
    std::optional<double> delta;  // default: sample_interval / 4
    std::optional<double> omega;  // default: 6 dB
    std::optional<double> t_max;  // default: scenario duration
    int min_steps = 2;
    convoy_params convoy;
};

/// Simulates the scenario, runs proximity discovery and the trajectory
/// baseline, and reports per-group precision/recall against ground truth
/// and against each other, flagging groups that proximity merges while the
/// baseline keeps them apart.
int cmd_compare(const compare_options& opts, std::ostream& out, std::ostream& err);

} // namespace proxconvoy::cli
