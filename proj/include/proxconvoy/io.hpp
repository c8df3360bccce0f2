#pragma once

#include "proxconvoy/convoy.hpp"
#include "proxconvoy/proximity.hpp"
#include "proxconvoy/simulator.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace proxconvoy {

// -- proximity log JSONL ------------------------------------------------------
//
// {"device":"aa:bb:cc:dd:ee:ff","t":1357000000.0,
//  "aps":[{"ssid":"mycafe","bssid":"00:11:22:33:44:55","rssi":-55}]}
//
// Lines need not be sorted globally, only per device. Blank lines are skipped.

/// Throws parse_error naming the offending line.
proximity_log read_proximity_log(std::istream& in);
/// Adds the lines of `in` to an existing log. Throws parse_error.
void read_proximity_log_into(std::istream& in, proximity_log& log);
/// Writes every sample ordered by (t, device).
void write_proximity_log(std::ostream& out, const proximity_log& log);

std::string to_jsonl(const device_id& device, const fingerprint& fp);

// -- trajectory JSONL: {"object":"o1","t":3,"x":12.5,"y":-4.0} ---------------

trajectory_db read_trajectories(std::istream& in);
/// Ordered by (t, object).
void write_trajectories(std::ostream& out, const trajectory_db& db);

// -- ground truth JSONL: {"device":"...","group":"g1","t_start":0,"t_end":120}
// Loners carry "group":null.

std::vector<ground_truth> read_ground_truth(std::istream& in);
void write_ground_truth(std::ostream& out, const std::vector<ground_truth>& truth);

// -- convoys: {"members":["a","b"],"t_start":0,"t_end":4} --------------------

void write_convoys(std::ostream& out, const std::vector<convoy>& convoys);

// -- scenario config (JSON) ---------------------------------------------------

/// Throws invalid_scenario for missing or mistyped fields.
mobility_scenario scenario_from_json(const nlohmann::json& j);
nlohmann::ordered_json scenario_to_json(const mobility_scenario& s);
mobility_scenario read_scenario(const std::filesystem::path& path);

} // namespace proxconvoy
