#include "proxconvoy/commands.hpp"

#include "proxconvoy/errors.hpp"
#include "proxconvoy/io.hpp"
#include "proxconvoy/simulator.hpp"

#include <charconv>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace proxconvoy::cli {

namespace {

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        fn();
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw error(fmt::format("cannot open {}", path.string()));
    return in;
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw error(fmt::format("cannot write {}", path.string()));
    out << contents;
    if (!out.flush())
        throw error(fmt::format("failed writing {}", path.string()));
}

proximity_log load_log(const fs::path& path) {
    auto in = open_input(path);
    return read_proximity_log(in);
}

mobility_scenario load_scenario(const std::optional<fs::path>& path,
                                const std::optional<std::string>& builtin,
                                std::optional<std::uint64_t> seed) {
    if (path.has_value() == builtin.has_value())
        throw invalid_params("give exactly one of --scenario or --builtin");
    mobility_scenario s;
    if (path) {
        s = read_scenario(*path);
    } else if (*builtin == "fig4") {
        s = fig4_scenario();
    } else if (*builtin == "corridor") {
        s = corridor_scenario();
    } else {
        throw invalid_params(fmt::format("unknown builtin scenario '{}'", *builtin));
    }
    if (seed)
        s.radio.seed = *seed;
    return s;
}

double parse_seconds(const std::string& text) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw invalid_params(fmt::format("t0 must be a number or 'latest', got '{}'", text));
    return value;
}

/// The device's sample the query is anchored at: its newest one for
/// "latest", otherwise the one nearest t0 within delta.
const fingerprint& anchor_sample(const proximity_log& log, const device_id& device,
                                 const std::string& t0, double delta) {
    const proximity_track& track = log.track(device);
    if (t0 == "latest")
        return track.samples().back();
    const double t = parse_seconds(t0);
    const fingerprint* fp = nearest_in_window(track, t, delta);
    if (fp == nullptr)
        throw error(fmt::format("{} has no sample within {} s of t0={}", device.str(), delta, t));
    return *fp;
}

std::string join(const std::vector<device_id>& devices) {
    std::string out;
    for (const auto& d : devices) {
        if (!out.empty())
            out += ", ";
        out += d.str();
    }
    return out;
}

} // namespace

int cmd_simulate(const simulate_options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto scenario = load_scenario(opts.scenario, opts.builtin, opts.seed);
        const auto result = simulate(scenario);
        fs::create_directories(opts.out_dir);

        std::ostringstream trajectories;
        write_trajectories(trajectories, result.trajectories);
        std::ostringstream proximity;
        write_proximity_log(proximity, result.log);
        std::ostringstream truth;
        write_ground_truth(truth, result.truth);

        write_file(opts.out_dir / "trajectories.jsonl", trajectories.str());
        write_file(opts.out_dir / "proximity.jsonl", proximity.str());
        write_file(opts.out_dir / "ground_truth.jsonl", truth.str());
        out << "devices: " << result.truth.size() << '\n'
            << "samples: " << result.log.sample_count() << '\n'
            << "seed: " << scenario.radio.seed << '\n';
    });
}

int cmd_ingest(const ingest_options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        proximity_log log;
        if (fs::exists(opts.store)) {
            auto in = open_input(opts.store);
            read_proximity_log_into(in, log);
        }
        for (const auto& path : opts.inputs) {
            auto in = open_input(path);
            try {
                read_proximity_log_into(in, log);
            } catch (const parse_error& e) {
                throw error(fmt::format("{}: {}", path.string(), e.what()));
            }
        }
        std::ostringstream buffer;
        write_proximity_log(buffer, log);
        const fs::path staging = fs::path(opts.store).concat(".tmp");
        write_file(staging, buffer.str());
        fs::rename(staging, opts.store);
        out << "devices: " << log.tracks().size() << '\n'
            << "samples: " << log.sample_count() << '\n';
    });
}

int cmd_query_group(const query_group_options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        opts.params.validate();
        const auto log = load_log(opts.log);
        const device_id user(opts.device);
        const fingerprint& anchor = anchor_sample(log, user, opts.t0, opts.params.delta);
        const auto result = discover_group(log, user, anchor.t, anchor.env, opts.params);
        const bool verdict = result.members.size() + 1 >= static_cast<std::size_t>(opts.params.n);
        fmt::print(out, "device: {}\n", user.str());
        fmt::print(out, "t0: {}\n", anchor.t);
        fmt::print(out, "delta: {}\nomega: {}\nt_max: {}\nn: {}\nmin_steps: {}\n",
                   opts.params.delta, opts.params.omega, opts.params.t_max, opts.params.n,
                   opts.params.min_steps);
        fmt::print(out, "steps_processed: {}\n", result.steps_processed);
        fmt::print(out, "oldest_step_time: {}\n", result.oldest_step_time);
        fmt::print(out, "members: [{}]\n", join(result.members));
        fmt::print(out, "group_size: {}\n", result.members.size() + 1);
        fmt::print(out, "in_group_of: {}\n", verdict);
    });
}

int cmd_eval_rules(const eval_rules_options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ruleset rules = [&] {
            auto in = open_input(opts.rules);
            std::stringstream text;
            text << in.rdbuf();
            try {
                return parse_rules(text.str());
            } catch (const syntax_error& e) {
                throw error(fmt::format("{}:{}", opts.rules.string(), e.what()));
            }
        }();
        const auto log = load_log(opts.log);
        const device_id device(opts.device);

        eval_context ctx(device);
        ctx.log = &log;
        ctx.session_gap = opts.session_gap;
        ctx.utc_offset = opts.utc_offset;
        ctx.engine = opts.engine;
        const proximity_track* track = log.find(device);
        const fingerprint* anchor = nullptr;
        if (opts.t0 == "latest") {
            if (track == nullptr)
                throw unknown_device(device.str());
            anchor = &track->samples().back();
        } else {
            ctx.now = parse_seconds(opts.t0);
            if (track != nullptr)
                anchor = nearest_in_window(*track, ctx.now, opts.engine.delta);
        }
        // Without a sample near t0 the device sees no networks.
        if (anchor != nullptr) {
            ctx.now = anchor->t;
            ctx.current = anchor->env;
        }
        for (const auto& fired : eval_rules(rules, ctx))
            out << nlohmann::ordered_json{{"rule", fired.id}, {"content", fired.content}}.dump()
                << '\n';
    });
}

int cmd_convoy_baseline(const convoy_baseline_options& opts, std::ostream& out,
                        std::ostream& err) {
    return guarded(err, [&] {
        opts.params.validate();
        auto in = open_input(opts.trajectories);
        const auto db = read_trajectories(in);
        write_convoys(out, discover_convoys(db, opts.params));
    });
}

namespace {

struct tally {
    std::size_t tp = 0, fp = 0, fn = 0;

    void add(const std::set<std::string>& predicted, const std::set<std::string>& reference) {
        for (const auto& d : predicted)
            (reference.count(d) ? tp : fp)++;
        for (const auto& d : reference)
            if (!predicted.count(d))
                ++fn;
    }

    static std::string ratio(std::size_t num, std::size_t den) {
        return den == 0 ? "n/a" : fmt::format("{:.3f}", static_cast<double>(num) / den);
    }
    std::string str() const {
        return fmt::format("precision={} recall={}", ratio(tp, tp + fp), ratio(tp, tp + fn));
    }
};

bool intersects(const std::set<std::string>& a, const std::set<std::string>& b) {
    for (const auto& x : a)
        if (b.count(x))
            return true;
    return false;
}

} // namespace

int cmd_compare(const compare_options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto scenario = load_scenario(opts.scenario, opts.builtin, opts.seed);
        const auto sim = simulate(scenario);
        if (sim.truth.empty())
            return;

        group_query_params params;
        params.delta = opts.delta.value_or(scenario.sample_interval / 4.0);
        params.omega = opts.omega.value_or(6.0);
        params.t_max = opts.t_max.value_or(std::max(scenario.duration, scenario.sample_interval));
        params.min_steps = opts.min_steps;
        params.validate();
        opts.convoy.validate();

        using device_set = std::set<std::string>;
        std::map<std::string, device_set> planted;             // group -> devices
        std::map<std::string, device_set> truth, proximity, baseline; // device -> companions
        std::vector<std::string> loners;
        for (const auto& g : sim.truth) {
            if (g.group)
                planted[*g.group].insert(g.device);
            else
                loners.push_back(g.device);
        }
        for (const auto& g : sim.truth) {
            truth[g.device] = g.group ? planted[*g.group] : device_set{};
            truth[g.device].erase(g.device);
            proximity[g.device];
            baseline[g.device];
        }
        for (const auto& [device, track] : sim.log.tracks()) {
            const fingerprint& latest = track.samples().back();
            if (latest.env.empty())
                continue;
            for (const auto& m : discover_group(sim.log, device, latest.t, latest.env, params).members)
                proximity[device.str()].insert(m.str());
        }
        for (const auto& c : discover_convoys(sim.trajectories, opts.convoy))
            for (const auto& a : c.members)
                for (const auto& b : c.members)
                    if (a != b)
                        baseline[a].insert(b);

        fmt::print(out, "devices: {}\ngroups: {}\nloners: {}\n", sim.truth.size(), planted.size(),
                   loners.size());
        fmt::print(out, "params: delta={} omega={} t_max={} min_steps={} e={} m={} k={}\n",
                   params.delta, params.omega, params.t_max, params.min_steps, opts.convoy.e,
                   opts.convoy.m, opts.convoy.k);
        for (const auto& [group, devices] : planted) {
            tally vs_truth, vs_baseline, baseline_vs_truth;
            for (const auto& d : devices) {
                vs_truth.add(proximity[d], truth[d]);
                vs_baseline.add(proximity[d], baseline[d]);
                baseline_vs_truth.add(baseline[d], truth[d]);
            }
            fmt::print(out, "group {}\n", group);
            fmt::print(out, "  members: {}\n", fmt::join(devices, ", "));
            fmt::print(out, "  proximity_vs_truth: {}\n", vs_truth.str());
            fmt::print(out, "  proximity_vs_baseline: {}\n", vs_baseline.str());
            fmt::print(out, "  baseline_vs_truth: {}\n", baseline_vs_truth.str());
        }
        if (!loners.empty()) {
            std::size_t flagged = 0;
            for (const auto& d : loners)
                flagged += proximity[d].empty() ? 0 : 1;
            fmt::print(out, "loner_false_positives: {}/{}\n", flagged, loners.size());
        }
        for (auto a = planted.begin(); a != planted.end(); ++a) {
            for (auto b = std::next(a); b != planted.end(); ++b) {
                bool merged = false, separated_by_baseline = true;
                for (const auto& d : a->second) {
                    merged = merged || intersects(proximity[d], b->second);
                    separated_by_baseline = separated_by_baseline && !intersects(baseline[d], b->second);
                }
                if (merged && separated_by_baseline)
                    fmt::print(out,
                               "divergence: proximity merges {} and {}; trajectory baseline "
                               "keeps them apart\n",
                               a->first, b->first);
            }
        }
    });
}

} // namespace proxconvoy::cli
