#include "proxconvoy/io.hpp"

#include "proxconvoy/errors.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>

namespace proxconvoy {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

/// Calls `fn(line_number, parsed)` for each non-blank line; wraps any
/// failure into a parse_error for that line.
template <class Fn>
void for_each_line(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try {
            fn(json::parse(line));
        } catch (const json::exception& e) {
            throw parse_error(number, e.what());
        } catch (const parse_error&) {
            throw;
        } catch (const error& e) {
            throw parse_error(number, e.what());
        }
    }
}

const json& field(const json& j, const char* name) {
    if (!j.is_object())
        throw error("expected a JSON object");
    auto it = j.find(name);
    if (it == j.end())
        throw error(fmt::format("missing field '{}'", name));
    return *it;
}

double number(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_number())
        throw error(fmt::format("field '{}' must be a number", name));
    return v.get<double>();
}

std::string text(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_string())
        throw error(fmt::format("field '{}' must be a string", name));
    return v.get<std::string>();
}

int integer(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_number_integer())
        throw error(fmt::format("field '{}' must be an integer", name));
    return v.get<int>();
}

ordered_json observations_json(const environment_snapshot& env) {
    ordered_json aps = ordered_json::array();
    for (const auto& obs : env.observations())
        aps.push_back(ordered_json{{"ssid", obs.ssid}, {"bssid", obs.bssid}, {"rssi", obs.rssi}});
    return aps;
}

} // namespace

void read_proximity_log_into(std::istream& in, proximity_log& log) {
    for_each_line(in, [&](const json& j) {
        device_id device(text(j, "device"));
        const double t = number(j, "t");
        const json& aps = field(j, "aps");
        if (!aps.is_array())
            throw error("field 'aps' must be an array");
        std::vector<ap_observation> observations;
        for (const auto& ap : aps)
            observations.push_back({text(ap, "ssid"), text(ap, "bssid"), integer(ap, "rssi")});
        log.ingest(device, {t, environment_snapshot(std::move(observations))});
    });
}

proximity_log read_proximity_log(std::istream& in) {
    proximity_log log;
    read_proximity_log_into(in, log);
    return log;
}

std::string to_jsonl(const device_id& device, const fingerprint& fp) {
    ordered_json j{{"device", device.str()}, {"t", fp.t}, {"aps", observations_json(fp.env)}};
    return j.dump();
}

void write_proximity_log(std::ostream& out, const proximity_log& log) {
    std::vector<std::pair<const device_id*, const fingerprint*>> rows;
    for (const auto& [device, track] : log.tracks())
        for (const auto& fp : track.samples())
            rows.emplace_back(&device, &fp);
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return a.second->t < b.second->t;
    });
    for (const auto& [device, fp] : rows)
        out << to_jsonl(*device, *fp) << '\n';
}

trajectory_db read_trajectories(std::istream& in) {
    // Collect first so that lines need not be sorted by time.
    std::vector<std::tuple<object_id, long, point2d>> rows;
    for_each_line(in, [&](const json& j) {
        const json& t = field(j, "t");
        if (!t.is_number_integer())
            throw error("field 't' must be an integer grid timestamp");
        rows.emplace_back(text(j, "object"), t.get<long>(),
                          point2d{number(j, "x"), number(j, "y")});
    });
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    trajectory_db db;
    for (const auto& [object, t, p] : rows)
        db.add(object, t, p);
    return db;
}

void write_trajectories(std::ostream& out, const trajectory_db& db) {
    for (long t = 0; t < db.horizon(); ++t)
        for (const auto& p : db.snapshot(t))
            out << ordered_json{{"object", p.id}, {"t", t}, {"x", p.position.x},
                                {"y", p.position.y}}
                       .dump()
                << '\n';
}

std::vector<ground_truth> read_ground_truth(std::istream& in) {
    std::vector<ground_truth> out;
    for_each_line(in, [&](const json& j) {
        ground_truth g;
        g.device = device_id(text(j, "device")).str();
        const json& group = field(j, "group");
        if (group.is_string())
            g.group = group.get<std::string>();
        else if (!group.is_null())
            throw error("field 'group' must be a string or null");
        g.t_start = number(j, "t_start");
        g.t_end = number(j, "t_end");
        out.push_back(std::move(g));
    });
    return out;
}

void write_ground_truth(std::ostream& out, const std::vector<ground_truth>& truth) {
    for (const auto& g : truth) {
        ordered_json j;
        j["device"] = g.device;
        j["group"] = g.group ? ordered_json(*g.group) : ordered_json(nullptr);
        j["t_start"] = g.t_start;
        j["t_end"] = g.t_end;
        out << j.dump() << '\n';
    }
}

void write_convoys(std::ostream& out, const std::vector<convoy>& convoys) {
    for (const auto& c : convoys)
        out << ordered_json{{"members", c.members}, {"t_start", c.t_start}, {"t_end", c.t_end}}
                   .dump()
            << '\n';
}

namespace {

point2d pair_of(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw error(fmt::format("field '{}' must be a [x, y] pair", name));
    return {v[0].get<double>(), v[1].get<double>()};
}

template <class T>
T optional_number(const json& j, const char* name, T fallback) {
    if (!j.contains(name))
        return fallback;
    const json& v = j.at(name);
    if (!v.is_number())
        throw error(fmt::format("field '{}' must be a number", name));
    return v.get<T>();
}

const json& array_field(const json& j, const char* name) {
    static const json empty = json::array();
    if (!j.contains(name))
        return empty;
    const json& v = j.at(name);
    if (!v.is_array())
        throw error(fmt::format("field '{}' must be an array", name));
    return v;
}

} // namespace

mobility_scenario scenario_from_json(const json& j) {
    try {
        if (!j.is_object())
            throw error("scenario must be a JSON object");
        mobility_scenario s;
        s.sample_interval = number(j, "sample_interval");
        s.duration = number(j, "duration");
        s.dropout_rate = optional_number(j, "dropout_rate", 0.0);
        if (j.contains("radio")) {
            const json& r = j.at("radio");
            s.radio.path_loss_exponent =
                optional_number(r, "path_loss_exponent", s.radio.path_loss_exponent);
            s.radio.noise_sigma_db = optional_number(r, "noise_sigma_db", s.radio.noise_sigma_db);
            s.radio.seed = optional_number<std::uint64_t>(r, "seed", s.radio.seed);
        }
        for (const auto& a : array_field(j, "aps")) {
            ap_node ap;
            ap.bssid = text(a, "bssid");
            ap.ssid = a.contains("ssid") ? text(a, "ssid") : std::string();
            ap.position = {number(a, "x"), number(a, "y")};
            ap.tx_power_dbm = optional_number(a, "tx_power_dbm", ap.tx_power_dbm);
            ap.detection_floor_dbm =
                optional_number(a, "detection_floor_dbm", ap.detection_floor_dbm);
            s.aps.push_back(std::move(ap));
        }
        for (const auto& g : array_field(j, "groups")) {
            group_spec group;
            group.id = text(g, "id");
            group.speed = optional_number(g, "speed", group.speed);
            for (const auto& p : array_field(g, "path")) {
                if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                    throw error("waypoints must be [x, y] pairs");
                group.path.push_back({p[0].get<double>(), p[1].get<double>()});
            }
            for (const auto& m : array_field(g, "members")) {
                group_member member;
                member.device = text(m, "device");
                if (m.contains("offset"))
                    member.offset = pair_of(m, "offset");
                group.members.push_back(std::move(member));
            }
            s.groups.push_back(std::move(group));
        }
        for (const auto& l : array_field(j, "loners")) {
            loner_spec loner;
            loner.device = text(l, "device");
            loner.speed = optional_number(l, "speed", loner.speed);
            const json& area = field(l, "area");
            loner.area_min = pair_of(area, "min");
            loner.area_max = pair_of(area, "max");
            s.loners.push_back(std::move(loner));
        }
        s.validate();
        return s;
    } catch (const invalid_scenario&) {
        throw;
    } catch (const std::exception& e) {
        throw invalid_scenario(e.what());
    }
}

ordered_json scenario_to_json(const mobility_scenario& s) {
    ordered_json j;
    j["sample_interval"] = s.sample_interval;
    j["duration"] = s.duration;
    j["dropout_rate"] = s.dropout_rate;
    j["radio"] = ordered_json{{"path_loss_exponent", s.radio.path_loss_exponent},
                              {"noise_sigma_db", s.radio.noise_sigma_db},
                              {"seed", s.radio.seed}};
    j["aps"] = ordered_json::array();
    for (const auto& ap : s.aps)
        j["aps"].push_back(ordered_json{{"bssid", ap.bssid},
                                        {"ssid", ap.ssid},
                                        {"x", ap.position.x},
                                        {"y", ap.position.y},
                                        {"tx_power_dbm", ap.tx_power_dbm},
                                        {"detection_floor_dbm", ap.detection_floor_dbm}});
    j["groups"] = ordered_json::array();
    for (const auto& g : s.groups) {
        ordered_json group{{"id", g.id}, {"speed", g.speed}};
        group["path"] = ordered_json::array();
        for (const auto& p : g.path)
            group["path"].push_back({p.x, p.y});
        group["members"] = ordered_json::array();
        for (const auto& m : g.members)
            group["members"].push_back(
                ordered_json{{"device", m.device}, {"offset", {m.offset.x, m.offset.y}}});
        j["groups"].push_back(std::move(group));
    }
    j["loners"] = ordered_json::array();
    for (const auto& l : s.loners)
        j["loners"].push_back(ordered_json{
            {"device", l.device},
            {"speed", l.speed},
            {"area", ordered_json{{"min", {l.area_min.x, l.area_min.y}},
                                  {"max", {l.area_max.x, l.area_max.y}}}}});
    return j;
}

mobility_scenario read_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw invalid_scenario(fmt::format("cannot open scenario file {}", path.string()));
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw invalid_scenario(fmt::format("{}: {}", path.string(), e.what()));
    }
    return scenario_from_json(j);
}

} // namespace proxconvoy
