#pragma once

#include "proxconvoy/convoy.hpp"
#include "proxconvoy/proximity.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace proxconvoy {

/// Omni-directional access point. tx_power_dbm is the RSSI at 1 m.
struct ap_node {
    std::string bssid;
    std::string ssid;
    point2d position;
    double tx_power_dbm = -40.0;
    double detection_floor_dbm = -95.0;
};

/// Log-distance path loss with additive Gaussian noise.
struct radio_model {
    double path_loss_exponent = 2.0;
    double noise_sigma_db = 0.0;
    std::uint64_t seed = 1;
};

struct group_member {
    std::string device;
    point2d offset; // fixed displacement from the group's path position
};

/// Devices that walk one waypoint path together at `speed` m/s and stay at
/// the last waypoint once they reach it.
struct group_spec {
    std::string id;
    std::vector<group_member> members;
    std::vector<point2d> path;
    double speed = 1.0;
};

/// Independent random-waypoint walker inside an axis-aligned area.
struct loner_spec {
    std::string device;
    point2d area_min;
    point2d area_max;
    double speed = 1.0;
};

struct mobility_scenario {
    std::vector<ap_node> aps;
    radio_model radio;
    std::vector<group_spec> groups;
    std::vector<loner_spec> loners;
    double sample_interval = 1.0;
    double duration = 0.0;
    double dropout_rate = 0.0;

    /// Throws invalid_scenario.
    void validate() const;
    /// Sample times 0, interval, 2*interval, ... up to duration.
    std::vector<double> sample_times() const;
};

/// Planted membership of one device; `group` is empty for loners.
struct ground_truth {
    std::string device;
    std::optional<std::string> group;
    double t_start = 0.0;
    double t_end = 0.0;

    friend bool operator==(const ground_truth&, const ground_truth&) = default;
};

/// Trajectory grid timestamp k corresponds to proximity time
/// k * sample_interval.
struct simulation_output {
    trajectory_db trajectories;
    proximity_log log;
    std::vector<ground_truth> truth;
};

/// Noise-free modeled RSSI rounded to integer dBm, or nullopt below the
/// detection floor. Distances are clamped to the 1 m reference distance.
std::optional<int> rssi_at(const ap_node& ap, point2d position, const radio_model& model);

/// As above with one Gaussian noise draw from `rng`.
std::optional<int> rssi_at(const ap_node& ap, point2d position, const radio_model& model,
                           std::mt19937_64& rng);

/// Deterministic in scenario.radio.seed. Each device that does not drop a
/// sampling cycle yields one trajectory point and one fingerprint listing
/// every detectable AP in scenario order.
simulation_output simulate(const mobility_scenario& scenario);

/// Two groups approaching a single omni-directional AP from opposite sides
/// on mirrored paths, so their RSSI sequences coincide.
mobility_scenario fig4_scenario();

/// A group of three walking a corridor lined with APs among seven random
/// walkers.
mobility_scenario corridor_scenario(std::uint64_t seed = 1, double noise_sigma_db = 0.0);

} // namespace proxconvoy
