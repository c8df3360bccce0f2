#include "proxconvoy/address.hpp"
#include "proxconvoy/group_discovery.hpp"
#include "proxconvoy/rules.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace proxconvoy {

namespace {

bool matches(const ap_observation& obs, const std::string& ref) {
    if (obs.ssid == ref)
        return true;
    return looks_like_address(ref) && obs.bssid == canonical_address(ref);
}

/// Strongest RSSI among observations matching `ref`.
std::optional<int> strongest(const environment_snapshot& env, const std::string& ref) {
    std::optional<int> best;
    for (const auto& obs : env.observations())
        if (matches(obs, ref) && (!best || obs.rssi > *best))
            best = obs.rssi;
    return best;
}

/// Some bssid of the current snapshot also appears in an earlier visit of
/// the same device. The current visit is the run of samples reaching back
/// from `now` with no gap above session_gap.
bool follow_up(const eval_context& ctx) {
    if (ctx.log == nullptr || ctx.current.empty())
        return false;
    const proximity_track* track = ctx.log->find(ctx.device);
    if (track == nullptr)
        return false;
    auto samples = track->samples();
    auto end = std::lower_bound(samples.begin(), samples.end(), ctx.now,
                                [](const fingerprint& fp, double v) { return fp.t < v; });
    double cursor = ctx.now;
    auto it = end;
    while (it != samples.begin()) {
        const auto& fp = *std::prev(it);
        if (cursor - fp.t > ctx.session_gap)
            break;
        cursor = fp.t;
        --it;
    }
    for (auto prev = samples.begin(); prev != it; ++prev)
        for (const auto& obs : prev->env.observations())
            if (ctx.current.find(obs.bssid) != nullptr)
                return true;
    return false;
}

struct evaluator {
    const eval_context& ctx;

    bool operator()(const is_visible& x) const { return strongest(ctx.current, x.net).has_value(); }
    bool operator()(const not_visible& x) const { return !strongest(ctx.current, x.net); }
    bool operator()(const close_than& x) const {
        const auto a = strongest(ctx.current, x.first);
        if (!a)
            return false;
        const auto b = strongest(ctx.current, x.second);
        return !b || *a > *b;
    }
    bool operator()(const first_visit&) const { return !follow_up(ctx); }
    bool operator()(const follow_up_visit&) const { return follow_up(ctx); }
    bool operator()(const time_within& x) const {
        const int now = ctx.time_of_day();
        if (x.begin <= x.end)
            return x.begin <= now && now < x.end;
        return now >= x.begin || now < x.end;
    }
    bool operator()(const time_compare& x) const {
        const int now = ctx.time_of_day();
        switch (x.relation) {
        case time_relation::less: return now < x.minutes;
        case time_relation::less_equal: return now <= x.minutes;
        case time_relation::equal: return now == x.minutes;
        case time_relation::greater_equal: return now >= x.minutes;
        case time_relation::greater: return now > x.minutes;
        }
        return false;
    }
    bool operator()(const in_group_of_term& x) const {
        // Nothing to compare against: no group can be established.
        if (ctx.current.empty())
            return false;
        static const proximity_log no_history;
        group_query_params params;
        params.delta = ctx.engine.delta;
        params.omega = ctx.engine.omega;
        params.min_steps = ctx.engine.min_steps;
        params.t_max = static_cast<double>(x.seconds);
        params.n = x.n;
        return in_group_of(ctx.log ? *ctx.log : no_history, ctx.device, ctx.now, ctx.current, params);
    }
    bool operator()(const and_node& x) const {
        return eval_predicate(*x.lhs, ctx) && eval_predicate(*x.rhs, ctx);
    }
    bool operator()(const or_node& x) const {
        return eval_predicate(*x.lhs, ctx) || eval_predicate(*x.rhs, ctx);
    }
    bool operator()(const not_node& x) const { return !eval_predicate(*x.operand, ctx); }
};

} // namespace

int eval_context::time_of_day() const {
    constexpr double day = 86400.0;
    const double local = std::floor(now + utc_offset);
    const double seconds = local - day * std::floor(local / day);
    return static_cast<int>(seconds) / 60;
}

bool eval_predicate(const predicate& p, const eval_context& ctx) {
    return std::visit(evaluator{ctx}, p.node);
}

std::vector<fired_rule> eval_rules(const ruleset& rules, const eval_context& ctx) {
    std::vector<fired_rule> out;
    for (const auto& r : rules.rules())
        if (eval_predicate(*r.condition, ctx))
            out.push_back({r.id, r.content});
    return out;
}

} // namespace proxconvoy
