#include "proxconvoy/comparability.hpp"

#include "proxconvoy/errors.hpp"

#include <cmath>
#include <cstdlib>

namespace proxconvoy {

void comparability_params::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw invalid_params("omega must be a positive finite RSSI threshold");
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw invalid_params("delta must be a non-negative finite time threshold");
}

bool comparable(const environment_snapshot& a, const environment_snapshot& b, double omega) {
    for (const auto& obs : a.observations()) {
        const auto* other = b.find(obs.bssid);
        if (other != nullptr && std::abs(obs.rssi - other->rssi) < omega)
            return true;
    }
    return false;
}

namespace {

bool assign_from(std::span<const fingerprint> first, std::span<const fingerprint> second,
                 const comparability_params& params, std::size_t i, std::size_t min_j) {
    if (i == first.size())
        return true;
    const fingerprint& fp = first[i];
    for (std::size_t j = min_j; j < second.size(); ++j) {
        const fingerprint& image = second[j];
        if (image.t > fp.t + params.delta)
            break;
        if (std::abs(image.t - fp.t) > params.delta)
            continue;
        if (!comparable(fp.env, image.env, params.omega))
            continue;
        if (assign_from(first, second, params, i + 1, j))
            return true;
    }
    return false;
}

} // namespace

bool tracks_similar(std::span<const fingerprint> first, std::span<const fingerprint> second,
                    const comparability_params& params) {
    params.validate();
    if (first.empty())
        throw empty_track();
    return assign_from(first, second, params, 0, 0);
}

} // namespace proxconvoy
