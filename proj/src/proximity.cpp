#include "proxconvoy/proximity.hpp"

#include "proxconvoy/address.hpp"
#include "proxconvoy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace proxconvoy {

environment_snapshot::environment_snapshot(std::vector<ap_observation> observations)
    : observations_(std::move(observations)) {
    std::set<std::string> seen;
    for (auto& obs : observations_) {
        obs.bssid = canonical_address(obs.bssid);
        if (!seen.insert(obs.bssid).second)
            throw duplicate_bssid(obs.bssid);
    }
}

const ap_observation* environment_snapshot::find(std::string_view bssid) const noexcept {
    for (const auto& obs : observations_)
        if (obs.bssid == bssid)
            return &obs;
    return nullptr;
}

device_id::device_id(std::string_view text) : value_(canonical_address(text)) {}

void proximity_track::append(fingerprint fp) {
    if (!std::isfinite(fp.t))
        throw invalid_params("fingerprint timestamp must be finite");
    if (!samples_.empty() && fp.t <= samples_.back().t)
        throw non_monotone_timestamp(device_.str(), fp.t, samples_.back().t);
    samples_.push_back(std::move(fp));
}

void proximity_track::erase(std::size_t index) {
    if (index >= samples_.size())
        throw std::out_of_range("sample index out of range");
    samples_.erase(samples_.begin() + static_cast<std::ptrdiff_t>(index));
}

void proximity_log::ingest(const device_id& device, fingerprint fp) {
    auto it = tracks_.find(device);
    if (it == tracks_.end()) {
        proximity_track fresh(device);
        fresh.append(std::move(fp));
        tracks_.emplace(device, std::move(fresh));
        return;
    }
    it->second.append(std::move(fp));
}

const proximity_track* proximity_log::find(const device_id& device) const {
    auto it = tracks_.find(device);
    return it == tracks_.end() ? nullptr : &it->second;
}

const proximity_track& proximity_log::track(const device_id& device) const {
    if (const auto* t = find(device))
        return *t;
    throw unknown_device(device.str());
}

proximity_track& proximity_log::track(const device_id& device) {
    auto it = tracks_.find(device);
    if (it == tracks_.end())
        throw unknown_device(device.str());
    return it->second;
}

std::size_t proximity_log::sample_count() const noexcept {
    std::size_t n = 0;
    for (const auto& [_, track] : tracks_)
        n += track.samples().size();
    return n;
}

proximity_log ingest_fingerprint(proximity_log log, const device_id& device, fingerprint fp) {
    log.ingest(device, std::move(fp));
    return log;
}

namespace {

// First sample with t > value.
auto after(std::span<const fingerprint> samples, double value) {
    return std::upper_bound(samples.begin(), samples.end(), value,
                            [](double v, const fingerprint& fp) { return v < fp.t; });
}

} // namespace

std::vector<std::pair<device_id, const fingerprint*>>
measurements_in_window(const proximity_log& log, double t_lo, double t_hi,
                       const device_id& exclude) {
    std::vector<std::pair<device_id, const fingerprint*>> out;
    if (t_lo > t_hi)
        return out;
    for (const auto& [device, track] : log.tracks()) {
        if (device == exclude)
            continue;
        auto samples = track.samples();
        // Timestamps are distinct, so the nearest sample to t_hi is the last one <= t_hi.
        auto it = after(samples, t_hi);
        if (it == samples.begin())
            continue;
        const fingerprint& last = *std::prev(it);
        if (last.t >= t_lo)
            out.emplace_back(device, &last);
    }
    return out;
}

const fingerprint* previous_measurement(const proximity_log& log, const device_id& device,
                                        double before) {
    auto samples = log.track(device).samples();
    auto it = std::lower_bound(samples.begin(), samples.end(), before,
                               [](const fingerprint& fp, double v) { return fp.t < v; });
    return it == samples.begin() ? nullptr : &*std::prev(it);
}

const fingerprint* nearest_in_window(const proximity_track& track, double t, double delta) {
    auto samples = track.samples();
    auto it = std::lower_bound(samples.begin(), samples.end(), t,
                               [](const fingerprint& fp, double v) { return fp.t < v; });
    const fingerprint* best = nullptr;
    double best_gap = 0.0;
    // The optimum is one of the two samples bracketing t; the earlier one is
    // considered first so it wins ties.
    if (it != samples.begin()) {
        const auto& before = *std::prev(it);
        const double gap = t - before.t;
        if (gap <= delta) {
            best = &before;
            best_gap = gap;
        }
    }
    if (it != samples.end()) {
        const double gap = it->t - t;
        if (gap <= delta && (best == nullptr || gap < best_gap))
            best = &*it;
    }
    return best;
}

} // namespace proxconvoy
