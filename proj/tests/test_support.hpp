#pragma once

#include "proxconvoy/proximity.hpp"

#include <cstdio>
#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace testing {

using namespace proxconvoy;

inline std::string ap(int k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "00:00:00:00:00:%02x", k);
    return buf;
}

inline device_id dev(int k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "02:00:00:00:00:%02x", k);
    return device_id(buf);
}

/// Snapshot from (ap index, rssi) pairs.
inline environment_snapshot env(std::initializer_list<std::pair<int, int>> aps) {
    std::vector<ap_observation> obs;
    for (auto [k, rssi] : aps)
        obs.push_back({"net" + std::to_string(k), ap(k), rssi});
    return environment_snapshot(std::move(obs));
}

inline fingerprint fp(double t, environment_snapshot e = {}) {
    return {t, std::move(e)};
}

/// Example log used across the group-discovery tests:
/// user A (1) with companions B (2) and C (3), samples at 80, 90, 100.
inline proximity_log example_log() {
    proximity_log log;
    log.ingest(dev(1), fp(80, env({{2, -60}})));
    log.ingest(dev(1), fp(90, env({{1, -52}})));
    log.ingest(dev(1), fp(100, env({{1, -50}})));
    log.ingest(dev(2), fp(80, env({{2, -65}})));
    log.ingest(dev(2), fp(90, env({{1, -55}})));
    log.ingest(dev(2), fp(100, env({{1, -53}})));
    log.ingest(dev(3), fp(80, env({{2, -61}})));
    log.ingest(dev(3), fp(90, env({{1, -80}})));
    log.ingest(dev(3), fp(100, env({{1, -54}})));
    return log;
}

inline environment_snapshot random_env(std::mt19937_64& rng, int ap_count, int max_visible) {
    std::uniform_int_distribution<int> count(0, max_visible);
    std::uniform_int_distribution<int> which(1, ap_count);
    std::uniform_int_distribution<int> rssi(-90, -40);
    std::vector<ap_observation> obs;
    const int n = count(rng);
    std::vector<bool> used(static_cast<std::size_t>(ap_count) + 1);
    for (int i = 0; i < n; ++i) {
        const int k = which(rng);
        if (used[static_cast<std::size_t>(k)])
            continue;
        used[static_cast<std::size_t>(k)] = true;
        obs.push_back({"net" + std::to_string(k), ap(k), rssi(rng)});
    }
    return environment_snapshot(std::move(obs));
}

/// `base` with every RSSI perturbed by up to +-jitter dB and, with
/// probability `swap`, one observation replaced by a random one.
inline environment_snapshot perturbed(const environment_snapshot& base, std::mt19937_64& rng,
                                      int jitter) {
    std::uniform_int_distribution<int> noise(-jitter, jitter);
    std::vector<ap_observation> obs;
    for (const auto& o : base.observations())
        obs.push_back({o.ssid, o.bssid, o.rssi + noise(rng)});
    return environment_snapshot(std::move(obs));
}

} // namespace testing
