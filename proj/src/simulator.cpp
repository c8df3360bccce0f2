#include "proxconvoy/simulator.hpp"

#include "proxconvoy/address.hpp"
#include "proxconvoy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <set>

namespace proxconvoy {

namespace {

constexpr double reference_distance = 1.0;

bool finite(point2d p) {
    return std::isfinite(p.x) && std::isfinite(p.y);
}

double modeled_rssi(const ap_node& ap, point2d position, const radio_model& model) {
    const double d = std::max(distance(ap.position, position), reference_distance);
    return ap.tx_power_dbm -
           10.0 * model.path_loss_exponent * std::log10(d / reference_distance);
}

std::optional<int> detect(const ap_node& ap, double rssi) {
    const int rounded = static_cast<int>(std::lround(rssi));
    if (rounded < ap.detection_floor_dbm)
        return std::nullopt;
    return rounded;
}

/// Position after walking `travelled` meters along a polyline.
point2d along(const std::vector<point2d>& path, double travelled) {
    for (std::size_t i = 1; i < path.size(); ++i) {
        const double leg = distance(path[i - 1], path[i]);
        if (travelled <= leg) {
            const double f = leg > 0.0 ? travelled / leg : 0.0;
            return {path[i - 1].x + f * (path[i].x - path[i - 1].x),
                    path[i - 1].y + f * (path[i].y - path[i - 1].y)};
        }
        travelled -= leg;
    }
    return path.back();
}

std::vector<point2d> random_waypoints(const loner_spec& loner, double duration,
                                      std::mt19937_64& rng) {
    std::uniform_real_distribution<double> xs(loner.area_min.x, loner.area_max.x);
    std::uniform_real_distribution<double> ys(loner.area_min.y, loner.area_max.y);
    std::vector<point2d> path{{xs(rng), ys(rng)}};
    const double needed = loner.speed * duration;
    const bool degenerate =
        loner.area_min.x == loner.area_max.x && loner.area_min.y == loner.area_max.y;
    double walked = 0.0;
    while (!degenerate && walked < needed) {
        point2d next{xs(rng), ys(rng)};
        walked += distance(path.back(), next);
        path.push_back(next);
    }
    return path;
}

std::string device_address(int group, int member) {
    return fmt::format("02:00:00:00:{:02x}:{:02x}", group, member);
}

} // namespace

void mobility_scenario::validate() const {
    if (!(sample_interval > 0.0) || !std::isfinite(sample_interval))
        throw invalid_scenario("sample_interval must be > 0");
    if (!(duration >= 0.0) || !std::isfinite(duration))
        throw invalid_scenario("duration must be >= 0");
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0))
        throw invalid_scenario("dropout_rate must lie in [0, 1)");
    if (!(radio.path_loss_exponent > 0.0))
        throw invalid_scenario("path_loss_exponent must be > 0");
    if (!(radio.noise_sigma_db >= 0.0))
        throw invalid_scenario("noise_sigma_db must be >= 0");

    std::set<std::string> bssids;
    for (const auto& ap : aps) {
        if (!looks_like_address(ap.bssid))
            throw invalid_scenario(fmt::format("invalid AP bssid '{}'", ap.bssid));
        if (!bssids.insert(canonical_address(ap.bssid)).second)
            throw invalid_scenario(fmt::format("duplicate AP bssid '{}'", ap.bssid));
        if (!finite(ap.position))
            throw invalid_scenario("AP position must be finite");
        if (!(ap.detection_floor_dbm < ap.tx_power_dbm))
            throw invalid_scenario(
                fmt::format("AP {}: detection floor must be below tx power", ap.bssid));
    }

    std::set<std::string> devices;
    auto check_device = [&](const std::string& device) {
        if (!looks_like_address(device))
            throw invalid_scenario(fmt::format("invalid device address '{}'", device));
        if (!devices.insert(canonical_address(device)).second)
            throw invalid_scenario(fmt::format("device '{}' declared twice", device));
    };
    std::set<std::string> group_ids;
    for (const auto& g : groups) {
        if (g.id.empty() || !group_ids.insert(g.id).second)
            throw invalid_scenario(fmt::format("group id '{}' is empty or repeated", g.id));
        if (g.members.empty())
            throw invalid_scenario(fmt::format("group {} has no members", g.id));
        if (g.path.empty())
            throw invalid_scenario(fmt::format("group {} has no waypoints", g.id));
        if (!(g.speed >= 0.0) || !std::isfinite(g.speed))
            throw invalid_scenario(fmt::format("group {}: speed must be >= 0", g.id));
        for (const auto& p : g.path)
            if (!finite(p))
                throw invalid_scenario(fmt::format("group {}: waypoint not finite", g.id));
        for (const auto& member : g.members) {
            check_device(member.device);
            if (!finite(member.offset))
                throw invalid_scenario("member offset must be finite");
        }
    }
    for (const auto& l : loners) {
        check_device(l.device);
        if (!finite(l.area_min) || !finite(l.area_max) || l.area_min.x > l.area_max.x ||
            l.area_min.y > l.area_max.y)
            throw invalid_scenario(fmt::format("loner {}: bad area", l.device));
        if (!(l.speed >= 0.0) || !std::isfinite(l.speed))
            throw invalid_scenario(fmt::format("loner {}: speed must be >= 0", l.device));
    }
}

std::vector<double> mobility_scenario::sample_times() const {
    std::vector<double> times;
    const auto cycles = static_cast<long>(std::floor(duration / sample_interval + 1e-9));
    for (long k = 0; k <= cycles; ++k)
        times.push_back(static_cast<double>(k) * sample_interval);
    return times;
}

std::optional<int> rssi_at(const ap_node& ap, point2d position, const radio_model& model) {
    return detect(ap, modeled_rssi(ap, position, model));
}

std::optional<int> rssi_at(const ap_node& ap, point2d position, const radio_model& model,
                           std::mt19937_64& rng) {
    double rssi = modeled_rssi(ap, position, model);
    if (model.noise_sigma_db > 0.0)
        rssi += std::normal_distribution<double>(0.0, model.noise_sigma_db)(rng);
    return detect(ap, rssi);
}

simulation_output simulate(const mobility_scenario& scenario) {
    scenario.validate();

    struct walker {
        std::string device;
        std::vector<point2d> path;
        double speed;
        point2d offset;
    };
    std::vector<walker> walkers;
    std::mt19937_64 mobility_rng(scenario.radio.seed);
    std::mt19937_64 radio_rng(scenario.radio.seed ^ 0x9e3779b97f4a7c15ULL);

    simulation_output out;
    const auto times = scenario.sample_times();
    const double t_end = times.back();
    for (const auto& g : scenario.groups) {
        for (const auto& member : g.members) {
            walkers.push_back({canonical_address(member.device), g.path, g.speed, member.offset});
            out.truth.push_back({walkers.back().device, g.id, 0.0, t_end});
        }
    }
    for (const auto& l : scenario.loners) {
        walkers.push_back({canonical_address(l.device),
                           random_waypoints(l, scenario.duration, mobility_rng), l.speed,
                           {0.0, 0.0}});
        out.truth.push_back({walkers.back().device, std::nullopt, 0.0, t_end});
    }

    std::vector<ap_node> aps = scenario.aps;
    for (auto& ap : aps)
        ap.bssid = canonical_address(ap.bssid);

    std::bernoulli_distribution dropped(scenario.dropout_rate);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        for (const auto& w : walkers) {
            if (scenario.dropout_rate > 0.0 && dropped(radio_rng))
                continue;
            const point2d base = along(w.path, w.speed * t);
            const point2d position{base.x + w.offset.x, base.y + w.offset.y};
            std::vector<ap_observation> visible;
            for (const auto& ap : aps)
                if (auto rssi = rssi_at(ap, position, scenario.radio, radio_rng))
                    visible.push_back({ap.ssid, ap.bssid, *rssi});
            out.trajectories.add(w.device, static_cast<long>(k), position);
            out.log.ingest(device_id(w.device), {t, environment_snapshot(std::move(visible))});
        }
    }
    return out;
}

mobility_scenario fig4_scenario() {
    mobility_scenario s;
    s.aps.push_back({"00:00:00:00:0f:04", "omni", {0.0, 0.0}, -40.0, -95.0});
    s.radio = {2.0, 0.0, 4};
    // Mirror images through the AP: every member of group 1 has a partner
    // in group 2 at the same distance from the AP at every instant.
    s.groups.push_back({"g1",
                        {{device_address(1, 1), {0.0, 1.0}}, {device_address(1, 2), {0.0, -1.0}}},
                        {{-60.0, 0.0}, {-6.0, 0.0}},
                        1.5});
    s.groups.push_back({"g2",
                        {{device_address(2, 1), {0.0, -1.0}}, {device_address(2, 2), {0.0, 1.0}}},
                        {{60.0, 0.0}, {6.0, 0.0}},
                        1.5});
    s.sample_interval = 4.0;
    s.duration = 36.0;
    return s;
}

mobility_scenario corridor_scenario(std::uint64_t seed, double noise_sigma_db) {
    mobility_scenario s;
    int index = 0;
    for (int i = -4; i <= 12; ++i) {
        for (int j = -4; j <= 4; ++j) {
            ++index;
            s.aps.push_back({fmt::format("00:00:00:00:{:02x}:{:02x}", index / 256, index % 256),
                             fmt::format("corridor-{}", index),
                             {25.0 * i, 25.0 * j + 5.0},
                             -40.0,
                             -82.0});
        }
    }
    s.radio = {3.0, noise_sigma_db, seed};
    s.groups.push_back({"g1",
                        {{device_address(1, 1), {0.0, -0.5}},
                         {device_address(1, 2), {0.0, 0.0}},
                         {device_address(1, 3), {0.0, 0.5}}},
                        {{0.0, 0.0}, {200.0, 0.0}},
                        1.2});
    for (int i = 1; i <= 7; ++i)
        s.loners.push_back({device_address(0, i), {-100.0, -100.0}, {300.0, 100.0}, 1.2});
    s.sample_interval = 10.0;
    s.duration = 160.0;
    return s;
}

} // namespace proxconvoy
