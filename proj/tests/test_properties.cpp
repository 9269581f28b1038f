// Randomized properties. Every case is drawn from a fixed-seed generator so
// failures reproduce; CAPTURE prints the seed.

#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "tritile/flux.hpp"
#include "tritile/harness.hpp"

using namespace tritile;

TEST_CASE("walks keep tilings valid and track twist through trit signs") {
    std::mt19937_64 gen(20261017);
    for (const RegionPtr& r : {build_box(3, 3, 2), build_box(4, 4, 4), build_box(2, 3, 4)}) {
        const Tiling start = default_base_tiling(r);
        for (int trial = 0; trial < 8; ++trial) {
            const std::uint64_t seed = gen();
            const std::uint64_t steps = 1 + gen() % 300;
            CAPTURE(seed);
            const WalkResult w = random_walk({r, MoveSet::flip_trit, steps, seed}, start);
            const Tiling t = walk_to(start, MoveSet::flip_trit, steps, seed);
            CHECK(t.hash() == w.final_hash);
            CHECK(Tiling::from_dimers(r, t.dimers()) == t);
            CHECK(twist(t) == w.final_label);
            for (int a = 0; a < 3; ++a) CHECK(twist_quarters(t, a) == oracle::twist_quarters_by_pairs(t, a));
        }
    }
}

TEST_CASE("flip-only walks never change twist") {
    std::mt19937_64 gen(7);
    const RegionPtr r = build_box(4, 4, 4);
    const Tiling start = default_base_tiling(r);
    for (int trial = 0; trial < 10; ++trial) {
        const std::uint64_t seed = gen();
        CAPTURE(seed);
        const WalkResult w = random_walk({r, MoveSet::flip, 200, seed}, start);
        CHECK(w.twist_histogram.size() == 1);
        CHECK(w.twist_histogram.begin()->first == 0);
    }
}

TEST_CASE("walks on tori preserve flux") {
    std::mt19937_64 gen(99);
    for (const RegionPtr& r : {build_torus(4, 4, 2), build_torus(4, 4, 4), build_torus(2, 2, 4)}) {
        const Tiling start = default_base_tiling(r);
        const std::vector<std::int64_t> f0 = flux(start);
        for (int trial = 0; trial < 6; ++trial) {
            const std::uint64_t seed = gen();
            CAPTURE(seed);
            const Tiling t = walk_to(start, MoveSet::flip_trit, 150, seed);
            CHECK(flux(t) == f0);
            CHECK(flux_from_dimers(t, base_tiling(r, 0)) == flux(t));
        }
    }
}

TEST_CASE("enumeration count is independent of the direction order") {
    std::mt19937_64 gen(5);
    for (const Vec3& d : {Vec3{3, 3, 2}, Vec3{2, 2, 3}, Vec3{4, 2, 2}}) {
        const RegionPtr r = build_box(d[0], d[1], d[2]);
        const std::uint64_t expected = TilingEnumerator(r).count();
        for (int trial = 0; trial < 5; ++trial) {
            TilingEnumerator::Order order = TilingEnumerator::kCanonicalOrder;
            std::shuffle(order.begin(), order.end(), gen);
            CAPTURE(order);
            CHECK(TilingEnumerator(r, order).count() == expected);
        }
    }
}

TEST_CASE("refinement commutes and preserves invariants") {
    std::mt19937_64 gen(3);
    const RegionPtr r = build_box(2, 2, 2);
    const RegionPtr r1 = refine_region(r, 1);
    for (const Tiling& t : enumerate_tilings(r)) {
        const Tiling a = refine_tiling(t, 1);
        CHECK(same_region(a.region(), *r1));
        CHECK(refine_tiling(t, 1, r1) == a);
        CHECK(twist(a) == twist(t));
    }
    const Tiling t = walk_to(default_base_tiling(build_box(2, 2, 1)), MoveSet::flip, 3, gen());
    CHECK(refine_tiling(refine_tiling(t, 1), 1) == refine_tiling(t, 2));

    const RegionPtr tor = build_torus(4, 4, 2);
    const Tiling tt = walk_to(default_base_tiling(tor), MoveSet::flip_trit, 50, gen());
    CHECK(flux(refine_tiling(tt, 1)) == flux(tt));
}

TEST_CASE("serialization round trips random tilings") {
    std::mt19937_64 gen(11);
    const RegionPtr r = build_box(4, 4, 4);
    for (int trial = 0; trial < 10; ++trial) {
        const Tiling t = walk_to(default_base_tiling(r), MoveSet::flip_trit, 100, gen());
        CHECK(deserialize_tiling(serialize_tiling(t)) == t);
    }
}
