#pragma once

#include <compare>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace proxconvoy {

/// One visible network: display name, access-point hardware address and
/// signal strength in dBm. The bssid is the identity key; ssid is metadata.
struct ap_observation {
    std::string ssid;
    std::string bssid;
    int rssi = 0;

    friend bool operator==(const ap_observation&, const ap_observation&) = default;
};

/// The set of networks visible in one scan. At most one observation per
/// bssid; observation order is preserved as given.
class environment_snapshot {
public:
    environment_snapshot() = default;

    /// Canonicalizes every bssid. Throws invalid_address or duplicate_bssid.
    explicit environment_snapshot(std::vector<ap_observation> observations);

    std::span<const ap_observation> observations() const noexcept { return observations_; }
    bool empty() const noexcept { return observations_.empty(); }
    std::size_t size() const noexcept { return observations_.size(); }

    /// Observation for a canonical bssid, or nullptr.
    const ap_observation* find(std::string_view bssid) const noexcept;

    friend bool operator==(const environment_snapshot&, const environment_snapshot&) = default;

private:
    std::vector<ap_observation> observations_;
};

/// A timestamped environment, t in seconds.
struct fingerprint {
    double t = 0.0;
    environment_snapshot env;

    friend bool operator==(const fingerprint&, const fingerprint&) = default;
};

/// Device hardware address in canonical form.
class device_id {
public:
    /// Throws invalid_address for anything that is not a hardware address.
    explicit device_id(std::string_view text);

    const std::string& str() const noexcept { return value_; }

    friend auto operator<=>(const device_id&, const device_id&) = default;
    friend bool operator==(const device_id&, const device_id&) = default;

private:
    std::string value_;
};

/// Time-ordered fingerprints of one device, strictly increasing in t.
class proximity_track {
public:
    explicit proximity_track(device_id device) : device_(std::move(device)) {}

    const device_id& device() const noexcept { return device_; }
    std::span<const fingerprint> samples() const noexcept { return samples_; }
    bool empty() const noexcept { return samples_.empty(); }

    /// Throws non_monotone_timestamp unless fp.t is after the last sample.
    void append(fingerprint fp);

    /// Removes the sample at `index`; the remaining samples stay ordered.
    void erase(std::size_t index);

private:
    device_id device_;
    std::vector<fingerprint> samples_;
};

/// Store of proximity tracks keyed by device. Iteration order is the
/// device order, so every query result is deterministic.
///
/// Const member functions never mutate, so any number of threads may query a
/// log concurrently as long as nobody ingests into it at the same time.
class proximity_log {
public:
    using track_map = std::map<device_id, proximity_track>;

    /// Appends fp to the device's track, creating the track if needed.
    /// Throws non_monotone_timestamp; on error the log is unchanged.
    void ingest(const device_id& device, fingerprint fp);

    /// Track for `device` or nullptr.
    const proximity_track* find(const device_id& device) const;

    /// Track for `device`; throws unknown_device.
    const proximity_track& track(const device_id& device) const;

    /// Mutable track access used to delete samples. Throws unknown_device.
    proximity_track& track(const device_id& device);

    const track_map& tracks() const noexcept { return tracks_; }
    std::size_t sample_count() const noexcept;
    bool empty() const noexcept { return tracks_.empty(); }

private:
    track_map tracks_;
};

/// Value-semantics ingest: returns `log` with the sample appended.
proximity_log ingest_fingerprint(proximity_log log, const device_id& device, fingerprint fp);

/// For every device other than `exclude` with a sample in [t_lo, t_hi], the
/// sample nearest to t_hi (ties toward the earlier sample). Device order.
std::vector<std::pair<device_id, const fingerprint*>>
measurements_in_window(const proximity_log& log, double t_lo, double t_hi,
                       const device_id& exclude);

/// Latest sample of `device` with t < before, or nullptr.
/// Throws unknown_device if the device has no track.
const fingerprint* previous_measurement(const proximity_log& log, const device_id& device,
                                        double before);

/// Sample with |sample.t - t| <= delta closest to t, ties toward the earlier
/// sample; nullptr if none qualifies.
const fingerprint* nearest_in_window(const proximity_track& track, double t, double delta);

} // namespace proxconvoy
