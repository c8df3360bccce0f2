#include "doctest.h"
#include "test_support.hpp"

#include "proxconvoy/comparability.hpp"
#include "proxconvoy/errors.hpp"

using namespace testing;

TEST_CASE("comparable requires a shared AP within the threshold") {
    CHECK(comparable(env({{1, -50}}), env({{1, -55}}), 10));
    CHECK_FALSE(comparable(env({{1, -50}}), env({{2, -50}}), 20));
    CHECK_FALSE(comparable(env({{1, -50}}), env({{1, -60}}), 10));
    CHECK(comparable(env({{1, -50}}), env({{1, -60}}), 10.5));
    CHECK(comparable(env({{1, -50}, {2, -70}}), env({{1, -90}, {2, -66}}), 10));
    CHECK_FALSE(comparable(env({}), env({}), 10));
}

TEST_CASE("comparable properties over random snapshots") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> omega(0.5, 30);
    for (int i = 0; i < 2000; ++i) {
        const auto a = random_env(rng, 5, 4);
        const auto b = random_env(rng, 5, 4);
        const double w = omega(rng);
        CHECK(comparable(a, b, w) == comparable(b, a, w));
        CHECK(comparable(a, a, w) == !a.empty());
        if (comparable(a, b, w))
            CHECK(comparable(a, b, w * 1.7));
    }
}

TEST_CASE("tracks_similar examples") {
    const std::vector<fingerprint> same{fp(0, env({{1, -50}})), fp(10, env({{1, -52}}))};
    CHECK(tracks_similar(same, same, {5, 1}));

    const std::vector<fingerprint> one{fp(0, env({{1, -50}}))};
    const std::vector<fingerprint> late{fp(5, env({{1, -50}}))};
    CHECK_FALSE(tracks_similar(one, late, {5, 2}));

    const std::vector<fingerprint> first{fp(0, env({{1, -50}})), fp(10, env({{2, -60}}))};
    const std::vector<fingerprint> second{fp(1, env({{1, -51}})), fp(9, env({{2, -61}}))};
    CHECK(tracks_similar(first, second, {5, 2}));
}

TEST_CASE("tracks_similar boundaries and mapping rules") {
    const std::vector<fingerprint> one{fp(0, env({{1, -50}}))};
    // The time window is inclusive.
    CHECK(tracks_similar(one, std::vector<fingerprint>{fp(2, env({{1, -50}}))}, {5, 2}));
    CHECK_FALSE(tracks_similar(one, std::vector<fingerprint>{fp(2.01, env({{1, -50}}))}, {5, 2}));

    // Two samples may share one image.
    const std::vector<fingerprint> pair{fp(0, env({{1, -50}})), fp(1, env({{1, -50}}))};
    CHECK(tracks_similar(pair, one, {5, 1}));

    // Order must be kept: the only comparable images are in reverse order.
    const std::vector<fingerprint> crossed_first{fp(0, env({{1, -50}})), fp(2, env({{2, -50}}))};
    const std::vector<fingerprint> crossed_second{fp(0.5, env({{2, -50}})), fp(1.5, env({{1, -50}}))};
    CHECK_FALSE(tracks_similar(crossed_first, crossed_second, {5, 2}));

    // The second sample skips an incomparable image and maps to a later one.
    const std::vector<fingerprint> skip_first{fp(0, env({{1, -50}})), fp(1, env({{2, -50}}))};
    const std::vector<fingerprint> skip_second{fp(0, env({{1, -50}, {2, -90}})),
                                                          fp(1, env({{1, -50}, {2, -50}}))};
    CHECK(tracks_similar(skip_first, skip_second, {5, 1}));

    CHECK_THROWS_AS(tracks_similar({}, one, {5, 1}), empty_track);
    CHECK_THROWS_AS(tracks_similar(one, one, {0, 1}), invalid_params);
    CHECK_THROWS_AS(tracks_similar(one, one, {5, -1}), invalid_params);
}

TEST_CASE("tracks_similar is reflexive and monotone in thresholds") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 400; ++trial) {
        std::vector<fingerprint> a, b;
        double ta = 0, tb = std::uniform_real_distribution<double>(-2, 2)(rng);
        for (int i = 0; i < 5; ++i) {
            ta += std::uniform_real_distribution<double>(0.5, 4)(rng);
            tb += std::uniform_real_distribution<double>(0.5, 4)(rng);
            a.push_back(fp(ta, random_env(rng, 3, 3)));
            b.push_back(fp(tb, random_env(rng, 3, 3)));
        }
        const comparability_params tight{std::uniform_real_distribution<double>(1, 20)(rng),
                                         std::uniform_real_distribution<double>(0, 3)(rng)};
        const comparability_params loose{tight.omega * 1.5, tight.delta * 2};

        if (tracks_similar(a, b, tight))
            CHECK(tracks_similar(a, b, loose));
        bool nonempty = true;
        for (const auto& s : a)
            nonempty = nonempty && !s.env.empty();
        if (nonempty)
            CHECK(tracks_similar(a, a, tight));
    }
}
