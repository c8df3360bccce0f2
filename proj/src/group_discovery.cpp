#include "proxconvoy/group_discovery.hpp"

#include "proxconvoy/comparability.hpp"
#include "proxconvoy/errors.hpp"

#include <cmath>

namespace proxconvoy {

void group_query_params::validate() const {
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw invalid_params("delta must be >= 0");
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw invalid_params("omega must be > 0");
    if (!(t_max > 0.0) || !std::isfinite(t_max))
        throw invalid_params("t_max must be > 0");
    if (n < 1)
        throw invalid_params("n must be >= 1");
    if (min_steps < 1)
        throw invalid_params("min_steps must be >= 1");
}

namespace {

std::vector<device_id> keys(const std::map<device_id, const fingerprint*>& candidates) {
    std::vector<device_id> out;
    out.reserve(candidates.size());
    for (const auto& [device, _] : candidates)
        out.push_back(device);
    return out;
}

} // namespace

group_result discover_group(const proximity_log& log, const device_id& user, double t0,
                            const environment_snapshot& e0, const group_query_params& params) {
    params.validate();
    if (e0.empty())
        throw empty_environment();

    group_result result;
    result.steps_processed = 1;
    result.oldest_step_time = t0;

    std::map<device_id, const fingerprint*> candidates;
    for (const auto& [device, fp] : measurements_in_window(log, t0 - params.delta, t0, user))
        if (comparable(fp->env, e0, params.omega))
            candidates.emplace(device, fp);
    result.trace.push_back({t0, keys(candidates)});
    if (candidates.empty())
        return result;

    const double horizon = t0 - params.t_max;
    const proximity_track* own = log.find(user);
    double t = t0;
    while (own != nullptr && t > horizon) {
        const fingerprint* previous = previous_measurement(log, user, t);
        if (previous == nullptr || previous->t < horizon)
            break;
        t = previous->t;
        ++result.steps_processed;
        result.oldest_step_time = t;

        for (auto it = candidates.begin(); it != candidates.end();) {
            const fingerprint* match = nearest_in_window(log.track(it->first), t, params.delta);
            if (match == nullptr || !comparable(match->env, previous->env, params.omega)) {
                it = candidates.erase(it);
            } else {
                it->second = match;
                ++it;
            }
        }
        result.trace.push_back({t, keys(candidates)});
        if (candidates.empty())
            break;
    }

    if (result.steps_processed >= static_cast<std::size_t>(params.min_steps))
        result.members = keys(candidates);
    return result;
}

bool in_group_of(const proximity_log& log, const device_id& user, double t0,
                 const environment_snapshot& e0, const group_query_params& params) {
    const auto result = discover_group(log, user, t0, e0, params);
    return result.members.size() + 1 >= static_cast<std::size_t>(params.n);
}

} // namespace proxconvoy
