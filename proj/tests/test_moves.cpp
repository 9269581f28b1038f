#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "tritile/flux.hpp"
#include "tritile/io.hpp"
#include "tritile/moves.hpp"

using namespace tritile;

namespace {

// A 3x3x2 tiling with exactly one trit, which is positive.
constexpr const char* kTritFixture =
    R"({"region":{"kind":"box","dims":[3,3,2]},"dimers":[[[0,0,1],[0,1,1]],[[0,1,0],[1,1,0]],[[0,2,1],[0,2,0]],)"
    R"([[1,0,0],[0,0,0]],[[1,1,1],[1,2,1]],[[1,2,0],[2,2,0]],[[2,0,1],[1,0,1]],[[2,1,0],[2,0,0]],[[2,2,1],[2,1,1]]]})";

bool contains_reverse_flip(const Tiling& after, const FlipMove& m) {
    for (const FlipMove& r : find_flips(after)) {
        auto a = r.removed, b = m.inserted;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a == b) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("flip counts agree with the slab-scan oracle") {
    for (const Vec3& d : {Vec3{2, 2, 1}, Vec3{2, 2, 2}, Vec3{3, 3, 2}}) {
        for (const Tiling& t : enumerate_tilings(build_box(d[0], d[1], d[2]))) {
            CHECK(static_cast<int>(find_flips(t).size()) == oracle::count_flips_by_slab_scan(t));
        }
    }
    const RegionPtr cube = build_box(2, 2, 2);
    CHECK(find_flips(base_tiling(cube, 0)).size() == 4);
    for (const Tiling& t : enumerate_tilings(build_box(2, 2, 1))) CHECK(find_flips(t).size() == 1);
}

TEST_CASE("trit counts agree with the cube-scan oracle") {
    for (const Tiling& t : enumerate_tilings(build_box(3, 3, 2))) {
        CHECK(static_cast<int>(find_trits(t).size()) == oracle::count_trits_by_cube_scan(t));
    }
    for (const Tiling& t : enumerate_tilings(build_box(2, 2, 2))) CHECK(find_trits(t).empty());
    CHECK(find_trits(base_tiling(build_box(3, 3, 2), 2)).empty());
}

TEST_CASE("flips are involutions with a reverse move") {
    const RegionPtr r = build_box(3, 3, 2);
    for (const Tiling& t : enumerate_tilings(r)) {
        for (const FlipMove& m : find_flips(t)) {
            const Tiling after = apply_flip(t, m);
            CHECK(diff_cycles(after, t).nontrivial_count() == 1);
            CHECK(apply_flip(after, m.reversed()) == t);
            CHECK(contains_reverse_flip(after, m));
        }
    }
    // On 2x2x1 a flip exchanges the two orientations.
    const std::vector<Tiling> two = enumerate_tilings(build_box(2, 2, 1));
    CHECK(apply_flip(two[0], find_flips(two[0])[0]) == two[1]);
}

TEST_CASE("trits are involutions and the reverse has opposite sign") {
    const RegionPtr r = build_box(3, 3, 2);
    for (const Tiling& t : enumerate_tilings(r)) {
        for (const TritMove& m : find_trits(t)) {
            const Tiling after = apply_trit(t, m);
            CHECK(apply_trit(after, m.reversed()) == t);
            bool found = false;
            for (const TritMove& back : find_trits(after)) {
                if (back.removed == m.inserted) {
                    found = true;
                    CHECK(back.sign == -m.sign);
                }
            }
            CHECK(found);
        }
    }
}

TEST_CASE("stale moves are rejected") {
    const std::vector<Tiling> two = enumerate_tilings(build_box(2, 2, 1));
    const FlipMove m = find_flips(two[0])[0];
    CHECK_THROWS_AS(apply_flip(two[1], m), TilingError);
}

TEST_CASE("golden trit fixture") {
    const Tiling t = deserialize_tiling(kTritFixture);
    const std::vector<TritMove> trits = find_trits(t);
    REQUIRE(trits.size() == 1);
    CHECK(trits[0].sign == +1);
    CHECK(trits[0].corner == Vec3{0, 1, 0});
    CHECK(twist(apply_trit(t, trits[0])) == twist(t) + 1);
}

TEST_CASE("trit sign depends on the cycle direction, the corner and its color") {
    CHECK(trit_sign(0, Color::black, +1) == -1);
    CHECK(trit_sign(0, Color::black, -1) == +1);
    CHECK(trit_sign(0, Color::white, +1) == +1);
    CHECK(trit_sign(1, Color::black, +1) == +1);
    CHECK(trit_sign(3, Color::black, +1) == -1);
}

TEST_CASE("move graph of 3x3x2") {
    const RegionPtr r = build_box(3, 3, 2);
    const MoveGraph flips(enumerate_tilings(r), MoveSet::flip);
    CHECK(flips.component_count() == 3);
    CHECK(flips.component_sizes() == std::vector<std::size_t>{227, 1, 1});
    CHECK(flips.hash_collisions() == 0);

    const MoveGraph both(enumerate_tilings(r), MoveSet::flip_trit);
    CHECK(both.component_count() == 1);

    // Trit edges carry opposite signs in the two directions.
    for (std::size_t i = 0; i < both.size(); ++i) {
        for (const MoveGraph::Edge& e : both.edges(i)) {
            bool matched = false;
            for (const MoveGraph::Edge& back : both.edges(e.to))
                if (back.to == i && back.trit_sign == -e.trit_sign) matched = true;
            CHECK(matched);
        }
    }
}

TEST_CASE("component counts do not depend on enumeration order") {
    const RegionPtr r = build_box(3, 3, 2);
    const MoveGraph a(enumerate_tilings(r), MoveSet::flip);
    const MoveGraph b(TilingEnumerator(r, {4, 5, 1, 0, 3, 2}).collect(), MoveSet::flip);
    CHECK(a.component_sizes() == b.component_sizes());
}

TEST_CASE("BFS trit labeling") {
    const RegionPtr r = build_box(3, 3, 2);
    const MoveGraph g(enumerate_tilings(r), MoveSet::flip_trit);
    const long base = g.index_of(base_tiling(r, 2));
    REQUIRE(base >= 0);
    const TritLabeling lab = bfs_trit_labeling(g, static_cast<std::size_t>(base));
    CHECK(lab.consistent);
    CHECK(lab.label[static_cast<std::size_t>(base)] == 0);

    std::vector<std::int64_t> frozen;
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(lab.reached[i]);
        if (find_flips(g.tiling(i)).empty()) frozen.push_back(lab.label[i]);
    }
    REQUIRE(frozen.size() == 2);
    CHECK(frozen[0] != 0);
    CHECK(frozen[0] == -frozen[1]);

    // Flip-only graphs label everything 0 within a component.
    const MoveGraph f(enumerate_tilings(r), MoveSet::flip);
    const TritLabeling flat = bfs_trit_labeling(f, static_cast<std::size_t>(base));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(flat.label[i] == 0);
}

TEST_CASE("moves on period-2 tori only use representative edges") {
    const RegionPtr r = build_torus(2, 2, 4);
    const std::vector<Tiling> all = enumerate_tilings(r);
    const MoveGraph g(all, MoveSet::flip_trit);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (const MoveGraph::Edge& e : g.edges(i)) CHECK(flux(g.tiling(e.to)) == flux(g.tiling(i)));
    }
}
