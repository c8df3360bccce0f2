#pragma once

#include "proxconvoy/proximity.hpp"

#include <span>

namespace proxconvoy {

/// Time threshold (seconds) and RSSI threshold (dB) used to match two tracks.
struct comparability_params {
    double omega = 10.0;
    double delta = 5.0;

    /// Throws invalid_params unless omega > 0 and delta >= 0.
    void validate() const;
};

/// True iff some bssid is visible in both snapshots with an RSSI difference
/// strictly below omega.
bool comparable(const environment_snapshot& a, const environment_snapshot& b, double omega);

/// True iff every fingerprint of `first` can be mapped to a fingerprint of
/// `second` within +-delta seconds and with a comparable environment, such
/// that mapped timestamps never decrease along `first`. Samples of `second`
/// may be left unmapped or be the image of several samples.
///
/// Exhaustive backtracking search over assignments; exponential in the worst
/// case. Throws empty_track if `first` is empty.
bool tracks_similar(std::span<const fingerprint> first, std::span<const fingerprint> second,
                    const comparability_params& params);

} // namespace proxconvoy
