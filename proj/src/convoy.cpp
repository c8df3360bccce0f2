#include "proxconvoy/convoy.hpp"

#include "proxconvoy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

namespace proxconvoy {

double distance(point2d a, point2d b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

void trajectory_db::add(const object_id& object, long t, point2d position) {
    if (t < 0)
        throw invalid_params("trajectory timestamp must be >= 0");
    if (!std::isfinite(position.x) || !std::isfinite(position.y))
        throw invalid_params("trajectory position must be finite");
    auto& samples = objects_[object];
    if (!samples.empty() && t <= samples.rbegin()->first)
        throw invalid_params("trajectory timestamps for '" + object + "' must increase");
    samples.emplace(t, position);
    horizon_ = std::max(horizon_, t + 1);
}

std::vector<labeled_point> trajectory_db::snapshot(long t) const {
    std::vector<labeled_point> out;
    for (const auto& [id, samples] : objects_) {
        auto it = samples.find(t);
        if (it != samples.end())
            out.push_back({id, it->second});
    }
    return out;
}

void convoy_params::validate() const {
    if (!(e > 0.0) || !std::isfinite(e))
        throw invalid_params("e must be > 0");
    if (m < 1)
        throw invalid_params("m must be >= 1");
    if (k < 1)
        throw invalid_params("k must be >= 1");
}

std::vector<point2d> neighborhood(point2d p, const std::vector<point2d>& points, double e) {
    std::vector<point2d> out;
    for (const auto& q : points)
        if (distance(p, q) <= e)
            out.push_back(q);
    return out;
}

std::vector<std::vector<object_id>> density_clusters(const std::vector<labeled_point>& points,
                                                     double e, int m) {
    if (!(e > 0.0))
        throw invalid_params("e must be > 0");
    if (m < 1)
        throw invalid_params("m must be >= 1");

    // Work in id order so the result does not depend on input order.
    std::vector<const labeled_point*> sorted;
    sorted.reserve(points.size());
    for (const auto& p : points)
        sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(),
              [](const auto* a, const auto* b) { return a->id < b->id; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i]->id == sorted[i - 1]->id)
            throw invalid_params("duplicate object id '" + sorted[i]->id + "'");

    const std::size_t n = sorted.size();
    std::vector<std::vector<std::size_t>> neighbors(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (distance(sorted[i]->position, sorted[j]->position) <= e)
                neighbors[i].push_back(j);

    std::vector<bool> core(n);
    for (std::size_t i = 0; i < n; ++i)
        core[i] = neighbors[i].size() >= static_cast<std::size_t>(m);

    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> label(n, none);
    std::size_t clusters = 0;
    // Seeds are visited in id order, so cluster c's seed (smallest core id)
    // is smaller than cluster c+1's: the label index doubles as seed rank.
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (!core[seed] || label[seed] != none)
            continue;
        const std::size_t c = clusters++;
        std::vector<std::size_t> frontier{seed};
        label[seed] = c;
        while (!frontier.empty()) {
            const std::size_t p = frontier.back();
            frontier.pop_back();
            for (std::size_t q : neighbors[p]) {
                if (!core[q] || label[q] != none)
                    continue;
                label[q] = c;
                frontier.push_back(q);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i])
            continue;
        for (std::size_t q : neighbors[i])
            if (core[q] && label[q] < label[i])
                label[i] = label[q];
    }

    std::vector<std::vector<object_id>> out(clusters);
    for (std::size_t i = 0; i < n; ++i)
        if (label[i] != none)
            out[label[i]].push_back(sorted[i]->id);
    return out;
}

namespace {

using member_set = std::vector<object_id>;

member_set intersect(const member_set& a, const member_set& b) {
    member_set out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool dominated_by(const convoy& a, const convoy& b) {
    return b.t_start <= a.t_start && a.t_end <= b.t_end &&
           std::includes(b.members.begin(), b.members.end(), a.members.begin(),
                         a.members.end());
}

} // namespace

std::vector<convoy> discover_convoys(const trajectory_db& db, const convoy_params& params) {
    params.validate();
    const auto min_size = static_cast<std::size_t>(params.m);

    std::vector<convoy> closed;
    std::map<member_set, long> alive; // member set -> earliest start
    for (long t = 0; t < db.horizon(); ++t) {
        auto clusters = density_clusters(db.snapshot(t), params.e, params.m);
        std::erase_if(clusters, [&](const auto& c) { return c.size() < min_size; });

        std::map<member_set, long> next;
        auto admit = [&](member_set members, long start) {
            auto [it, inserted] = next.emplace(std::move(members), start);
            if (!inserted)
                it->second = std::min(it->second, start);
        };
        for (const auto& [members, start] : alive) {
            bool continues = false;
            for (const auto& cluster : clusters) {
                auto common = intersect(members, cluster);
                if (common.size() < min_size)
                    continue;
                continues = continues || common.size() == members.size();
                admit(std::move(common), start);
            }
            if (!continues && t - start >= params.k)
                closed.push_back({members, start, t - 1});
        }
        for (const auto& cluster : clusters)
            admit(cluster, t);
        alive = std::move(next);
    }
    for (const auto& [members, start] : alive)
        if (db.horizon() - start >= params.k)
            closed.push_back({members, start, db.horizon() - 1});

    std::vector<convoy> out;
    for (std::size_t i = 0; i < closed.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < closed.size() && keep; ++j) {
            if (i == j)
                continue;
            // Of two identical entries keep the first.
            if (closed[i] == closed[j])
                keep = j > i;
            else if (dominated_by(closed[i], closed[j]))
                keep = false;
        }
        if (keep)
            out.push_back(closed[i]);
    }
    std::sort(out.begin(), out.end(), [](const convoy& a, const convoy& b) {
        return std::tie(a.t_start, a.t_end, a.members) < std::tie(b.t_start, b.t_end, b.members);
    });
    return out;
}

} // namespace proxconvoy
