#include "proxconvoy/commands.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace cli = proxconvoy::cli;

namespace {

void add_group_flags(CLI::App& cmd, proxconvoy::group_query_params& p) {
    cmd.add_option("--delta", p.delta, "time threshold in seconds")->capture_default_str();
    cmd.add_option("--omega", p.omega, "RSSI threshold in dB (strict)")->capture_default_str();
    cmd.add_option("--tmax", p.t_max, "lookback horizon in seconds")->capture_default_str();
    cmd.add_option("--n", p.n, "minimum group size including the user")->capture_default_str();
    cmd.add_option("--min-steps", p.min_steps, "user samples required before a group counts")
        ->capture_default_str();
}

void add_convoy_flags(CLI::App& cmd, proxconvoy::convoy_params& p) {
    cmd.add_option("--e", p.e, "distance threshold in meters")->capture_default_str();
    cmd.add_option("--m", p.m, "minimum convoy size")->capture_default_str();
    cmd.add_option("--k", p.k, "minimum lifetime in grid timestamps")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Co-traveling group discovery from Wi-Fi proximity logs"};
    app.require_subcommand(1);
    int status = 0;

    cli::simulate_options sim;
    auto* simulate = app.add_subcommand("simulate", "generate trajectories, proximity log and ground truth");
    simulate->add_option("--scenario", sim.scenario, "scenario JSON file");
    simulate->add_option("--builtin", sim.builtin, "builtin scenario: corridor or fig4");
    simulate->add_option("--out", sim.out_dir, "output directory")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "override the scenario seed");
    simulate->callback([&] { status = cli::cmd_simulate(sim, std::cout, std::cerr); });

    cli::ingest_options ing;
    auto* ingest = app.add_subcommand("ingest", "validate proximity JSONL and merge it into a store");
    ingest->add_option("inputs", ing.inputs, "proximity JSONL files")->required();
    ingest->add_option("--store", ing.store, "store file to create or extend")->required();
    ingest->callback([&] { status = cli::cmd_ingest(ing, std::cout, std::cerr); });

    cli::query_group_options qg;
    auto* query = app.add_subcommand("query-group", "discover the co-traveling group of a device");
    query->add_option("--log", qg.log, "proximity JSONL")->required();
    query->add_option("--device", qg.device, "querying device address")->required();
    query->add_option("--t0", qg.t0, "query time in seconds, or 'latest'")->capture_default_str();
    add_group_flags(*query, qg.params);
    query->callback([&] { status = cli::cmd_query_group(qg, std::cout, std::cerr); });

    cli::eval_rules_options er;
    auto* eval = app.add_subcommand("eval-rules", "evaluate production rules for a device");
    eval->add_option("--log", er.log, "proximity JSONL")->required();
    eval->add_option("--rules", er.rules, "rules file")->required();
    eval->add_option("--device", er.device, "device address")->required();
    eval->add_option("--t0", er.t0, "evaluation time in seconds, or 'latest'")->capture_default_str();
    eval->add_option("--session-gap", er.session_gap, "seconds separating two visits")
        ->capture_default_str();
    eval->add_option("--utc-offset", er.utc_offset, "local clock offset in seconds")
        ->capture_default_str();
    eval->add_option("--delta", er.engine.delta, "IN_GROUP_OF time threshold in seconds")
        ->capture_default_str();
    eval->add_option("--omega", er.engine.omega, "IN_GROUP_OF RSSI threshold in dB")
        ->capture_default_str();
    eval->add_option("--min-steps", er.engine.min_steps, "IN_GROUP_OF minimum user samples")
        ->capture_default_str();
    eval->callback([&] { status = cli::cmd_eval_rules(er, std::cout, std::cerr); });

    cli::convoy_baseline_options cb;
    auto* baseline = app.add_subcommand("convoy-baseline", "density-based convoys over trajectories");
    baseline->add_option("--trajectories", cb.trajectories, "trajectory JSONL")->required();
    add_convoy_flags(*baseline, cb.params);
    baseline->callback([&] { status = cli::cmd_convoy_baseline(cb, std::cout, std::cerr); });

    cli::compare_options cmp;
    auto* compare = app.add_subcommand("compare", "proximity discovery vs ground truth and baseline");
    compare->add_option("--scenario", cmp.scenario, "scenario JSON file");
    compare->add_option("--builtin", cmp.builtin, "builtin scenario: corridor or fig4");
    compare->add_option("--seed", cmp.seed, "override the scenario seed");
    compare->add_option("--delta", cmp.delta, "time threshold [default: sample_interval/4]");
    compare->add_option("--omega", cmp.omega, "RSSI threshold in dB [default: 6]");
    compare->add_option("--tmax", cmp.t_max, "lookback horizon [default: scenario duration]");
    compare->add_option("--min-steps", cmp.min_steps, "minimum user samples")->capture_default_str();
    add_convoy_flags(*compare, cmp.convoy);
    compare->callback([&] { status = cli::cmd_compare(cmp, std::cout, std::cerr); });

    CLI11_PARSE(app, argc, argv);
    return status;
}
