#pragma once

#include <map>
#include <string>
#include <vector>

namespace proxconvoy {

using object_id = std::string;

struct point2d {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const point2d&, const point2d&) = default;
};

double distance(point2d a, point2d b);

struct labeled_point {
    object_id id;
    point2d position;
};

/// Coordinate trajectories on a shared integer timestamp grid. Objects may
/// skip grid timestamps; an object has at most one position per timestamp.
class trajectory_db {
public:
    /// Throws invalid_params for t < 0, a non-finite position, or a timestamp
    /// not after the object's previous one.
    void add(const object_id& object, long t, point2d position);

    /// Positions of all objects present at grid timestamp t, ordered by id.
    std::vector<labeled_point> snapshot(long t) const;

    /// Number of grid timestamps, i.e. last timestamp + 1 (0 when empty).
    long horizon() const noexcept { return horizon_; }

    const std::map<object_id, std::map<long, point2d>>& objects() const noexcept {
        return objects_;
    }

private:
    std::map<object_id, std::map<long, point2d>> objects_;
    long horizon_ = 0;
};

/// Distance threshold e (meters), minimum group size m and minimum lifetime
/// k in consecutive grid timestamps.
struct convoy_params {
    double e = 5.0;
    int m = 2;
    int k = 3;

    void validate() const;
};

struct convoy {
    std::vector<object_id> members; // sorted
    long t_start = 0;
    long t_end = 0;

    long lifetime() const noexcept { return t_end - t_start + 1; }
    friend bool operator==(const convoy&, const convoy&) = default;
};

/// Points of `points` within distance e of p, boundary included.
std::vector<point2d> neighborhood(point2d p, const std::vector<point2d>& points, double e);

/// DBSCAN with inclusive e-neighborhoods (a point counts itself) and core
/// threshold |N_e(p)| >= m. A border point reachable from several clusters
/// joins the one whose smallest core id is smallest. Noise is omitted.
/// Clusters are sorted member lists, ordered by their first member.
std::vector<std::vector<object_id>> density_clusters(const std::vector<labeled_point>& points,
                                                     double e, int m);

/// Convoys via per-timestamp clustering and intersection of candidates over
/// consecutive timestamps. Only maximal convoys are reported: none is
/// contained, in members and in time, in another reported convoy. Results are
/// sorted by (t_start, t_end, members).
std::vector<convoy> discover_convoys(const trajectory_db& db, const convoy_params& params);

} // namespace proxconvoy
