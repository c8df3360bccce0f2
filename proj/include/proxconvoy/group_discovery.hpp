#pragma once

#include "proxconvoy/proximity.hpp"

#include <cstddef>
#include <map>
#include <vector>

namespace proxconvoy {

/// Thresholds for a group query.
///
/// `t_max` is the lookback horizon in seconds (the duration argument of the
/// IN_GROUP_OF predicate), `n` the minimum group size counting the querying
/// user, and `min_steps` the number of user samples that must be processed
/// before any companion is reported.
struct group_query_params {
    double delta = 5.0;
    double omega = 10.0;
    double t_max = 60.0;
    int n = 2;
    int min_steps = 2;

    void validate() const;
};

/// Candidate set surviving after one processed user sample.
struct group_step {
    double t = 0.0;
    std::vector<device_id> candidates;
};

struct group_result {
    /// Companions of the querying user; never contains the user.
    std::vector<device_id> members;
    std::size_t steps_processed = 0;
    double oldest_step_time = 0.0;
    /// One entry per processed user sample, newest first.
    std::vector<group_step> trace;
};

/// Backward scan over the user's history starting from the live snapshot
/// `e0` at `t0`.
///
/// Candidates are the other devices' latest samples in [t0 - delta, t0] that
/// are comparable with e0. Each earlier user sample inside
/// [t0 - t_max, t0) then re-matches every candidate to its sample nearest
/// the user's timestamp within +-delta; candidates without such a sample, or
/// whose matched snapshot is not comparable with the user's, are dropped for
/// good. Missing values are never interpolated.
///
/// The user need not have a track; then only the live snapshot is processed.
/// Throws empty_environment if e0 is empty, invalid_params on bad params.
group_result discover_group(const proximity_log& log, const device_id& user, double t0,
                            const environment_snapshot& e0, const group_query_params& params);

/// True iff discover_group finds at least n - 1 companions.
bool in_group_of(const proximity_log& log, const device_id& user, double t0,
                 const environment_snapshot& e0, const group_query_params& params);

} // namespace proxconvoy
