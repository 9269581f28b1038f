#include <doctest.h>

#include "oracles.hpp"
#include "tritile/flux.hpp"
#include "tritile/harness.hpp"

using namespace tritile;

namespace {

// Color sum of the closed dual box plus that of the cells strictly inside it.
std::int64_t expected_closed_flux(const Region& r, const Vec3& corner, const Vec3& dims) {
    std::int64_t total = 0;
    for (int x = 0; x <= dims[0]; ++x)
        for (int y = 0; y <= dims[1]; ++y)
            for (int z = 0; z <= dims[2]; ++z) {
                const bool inside = x > 0 && x < dims[0] && y > 0 && y < dims[1] && z > 0 && z < dims[2];
                total += (inside ? 2 : 1) * to_int(r.color_at({corner[0] + x, corner[1] + y, corner[2] + z}));
            }
    return total;
}

}  // namespace

TEST_CASE("twist agrees with the pair oracle") {
    for (const Vec3& d : {Vec3{3, 3, 2}, Vec3{2, 2, 2}, Vec3{2, 3, 2}}) {
        for (const Tiling& t : enumerate_tilings(build_box(d[0], d[1], d[2]))) {
            for (int a = 0; a < 3; ++a) CHECK(twist_quarters(t, a) == oracle::twist_quarters_by_pairs(t, a));
            CHECK(twist(t, 0) == twist(t, 1));
            CHECK(twist(t, 1) == twist(t, 2));
        }
    }
}

TEST_CASE("twist histogram of 3x3x2") {
    std::map<std::int64_t, int> hist;
    for (const Tiling& t : enumerate_tilings(build_box(3, 3, 2))) ++hist[twist(t)];
    CHECK(hist == std::map<std::int64_t, int>{{-1, 1}, {0, 227}, {1, 1}});
    CHECK_THROWS_AS(twist(base_tiling(build_torus(2, 2, 4), 2)), UnsupportedRegion);
}

TEST_CASE("closed box surfaces") {
    const RegionPtr r = build_box(4, 4, 4);
    const DiscreteSurface unit = closed_box_surface(r, {1, 1, 1}, {1, 1, 1});
    CHECK(unit.squares().size() == 6);
    CHECK(unit.closed());
    CHECK(unit.vertices().size() == 8);

    const DiscreteSurface big = closed_box_surface(r, {0, 0, 0}, {2, 2, 2});
    CHECK(big.squares().size() == 24);
    CHECK(big.closed());
    CHECK(big.vertices().size() == 26);
    CHECK(big.interior_vertices().size() == 26);
    CHECK_THROWS_AS(closed_box_surface(r, {2, 2, 2}, {2, 2, 2}), SurfaceError);

    // Flux out of a closed surface is fixed by colors alone.
    const RegionPtr r6 = build_box(6, 5, 5);
    const DiscreteSurface off = closed_box_surface(r6, {1, 1, 1}, {3, 2, 3});
    const Tiling start = base_tiling(r, 0);
    const Tiling start6 = base_tiling(r6, 0);
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const Tiling t = walk_to(start, MoveSet::flip_trit, 60, seed);
        CHECK(flux_through_surface(t, big) == expected_closed_flux(*r, {0, 0, 0}, {2, 2, 2}));
        CHECK(flux_through_surface(t, unit) == 0);
        const Tiling t6 = walk_to(start6, MoveSet::flip_trit, 200, seed);
        CHECK(flux_through_surface(t6, off) == expected_closed_flux(*r6, {1, 1, 1}, {3, 2, 3}));
    }
}

TEST_CASE("cutting surfaces") {
    const RegionPtr r = build_torus(4, 4, 4);
    const DiscreteSurface s = cutting_surface(r, 0);
    CHECK(s.squares().size() == 16);
    CHECK(s.closed());
    CHECK(s.interior_vertices().size() == 16);
    CHECK(cutting_surface(build_torus(2, 4, 6), 2).squares().size() == 8);
    CHECK_THROWS(cutting_surface(build_box(2, 2, 2), 0));
}

TEST_CASE("torus flux and modulus") {
    const RegionPtr r = build_torus(4, 4, 4);
    const Tiling base = base_tiling(r, 0);
    const Tiling mixed = mixed_column_tiling(r);

    CHECK(flux(base) == std::vector<std::int64_t>{0, 0, 0});
    CHECK(modulus(base) == 0);
    CHECK(flux(mixed) == std::vector<std::int64_t>{-8, 0, 0});
    CHECK(modulus(mixed) == 16);
    CHECK(oracle::x_cut_flux_by_columns(mixed) == 16);
    CHECK(flux_through_surface(mixed, cutting_surface(r, 0)) == 16);
    CHECK(std::abs(flux_through_surface(base, cutting_surface(r, 0))) == std::abs(oracle::x_cut_flux_by_columns(base)));

    CHECK(flux_from_dimers(mixed, base) == flux(mixed));
    CHECK(flux_from_dimers(base, base) == std::vector<std::int64_t>{0, 0, 0});

    CHECK(flux(base_tiling(build_box(3, 3, 2), 2)).empty());
    CHECK(modulus(base_tiling(build_box(3, 3, 2), 2)) == 0);
    const RegionPtr vox = build_voxel_region({{0, 0, 0}, {1, 0, 0}});
    CHECK_THROWS_AS(flux(base_tiling(vox, 0)), UnsupportedRegion);
}

TEST_CASE("flux is constant along walks on tori") {
    const RegionPtr r = build_torus(4, 4, 4);
    for (const Tiling& start : {base_tiling(r, 0), mixed_column_tiling(r)}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const Tiling t = walk_to(start, MoveSet::flip_trit, 80, seed);
            CHECK(flux(t) == flux(start));
            CHECK(modulus(t) == modulus(start));
            CHECK(oracle::x_cut_flux_by_columns(t) == flux_through_surface(t, cutting_surface(r, 0)));
        }
    }
}

TEST_CASE("relative twist") {
    const RegionPtr r = build_box(3, 3, 2);
    const std::vector<Tiling> all = enumerate_tilings(r);
    for (std::size_t i = 0; i < all.size(); i += 11) {
        CHECK(relative_twist(all[i], all[i]) == RelativeTwist{0, 0});
        for (std::size_t j = 0; j < all.size(); j += 23) {
            const RelativeTwist ij = relative_twist(all[i], all[j]);
            CHECK(ij.value == twist(all[i]) - twist(all[j]));
            CHECK(relative_twist(all[j], all[i]).value == -ij.value);
        }
    }

    const RegionPtr tor = build_torus(2, 2, 4);
    const MoveGraph g(enumerate_tilings(tor), MoveSet::flip_trit);
    const Tiling b = base_tiling(tor, 2);
    CHECK(relative_twist(b, b, &g).value == 0);
    CHECK_THROWS(relative_twist(b, b));
}

TEST_CASE("surface predicates") {
    const RegionPtr r = build_box(3, 3, 2);
    const std::vector<Tiling> all = enumerate_tilings(r);

    SUBCASE("flip squares are balanced, zero-flux and tangent") {
        for (std::size_t i = 0; i < all.size(); i += 7) {
            for (const FlipMove& m : find_flips(all[i])) {
                const Tiling after = apply_flip(all[i], m);
                const DiscreteSurface s = flip_surface(all[i], m);
                CHECK(s.squares().size() == 1);
                const SurfacePredicates p = surface_predicates(all[i], after, s);
                CHECK(p.balanced);
                CHECK(p.zero_flux);
                CHECK(p.tangent);
            }
        }
    }
    SUBCASE("trit surfaces are not tangent and carry unit flux") {
        int seen = 0;
        for (const Tiling& t : all) {
            for (const TritMove& m : find_trits(t)) {
                const Tiling after = apply_trit(t, m);
                for (int choice = 0; choice < 2; ++choice) {
                    std::optional<DiscreteSurface> sur;
                    try {
                        sur.emplace(trit_surface(t, m, choice));
                    } catch (const SurfaceError&) {
                        continue;  // untouched corner outside the box
                    }
                    const DiscreteSurface& s = *sur;
                    CHECK(s.squares().size() == 3);
                    ++seen;
                    const SurfacePredicates p = surface_predicates(t, after, s);
                    CHECK_FALSE(p.tangent);
                    CHECK(s.interior_vertices().size() == 1);
                    CHECK(std::abs(flux_through_surface(t, s)) == 1);
                }
            }
        }
        CHECK(seen > 0);
    }
    SUBCASE("mismatched boundary is reported") {
        const FlipMove m = find_flips(all[0])[0];
        const DiscreteSurface s = flip_surface(all[0], m);
        CHECK_THROWS_WITH_AS(surface_predicates(all[0], all[0], s), doctest::Contains("extra"), SurfaceError);
    }
    SUBCASE("cutting torus is not tangent") {
        const RegionPtr tor = build_torus(4, 4, 4);
        const Tiling b = base_tiling(tor, 0);
        const Tiling m = mixed_column_tiling(tor);
        const DiscreteSurface s = cutting_surface(tor, 1);
        CHECK(cycle_chain(m, b).size() > 0);
        CHECK_THROWS_AS(surface_predicates(b, m, s), SurfaceError);
        CHECK(surface_predicates(b, b, s).tangent);
        const Tiling by = base_tiling(tor, 1);
        CHECK_FALSE(surface_predicates(by, by, s).tangent);
    }
}

TEST_CASE("vertex flow") {
    const RegionPtr r = build_torus(4, 4, 4);
    const DiscreteSurface s = cutting_surface(r, 2);
    const Tiling t = base_tiling(r, 2);
    for (CellId v : s.interior_vertices()) {
        const Vec3& p = r->coords(v);
        CHECK(p[2] == 0);
        // z-dimers pair layers {0,1}: every vertex in layer 0 leaves upward.
        CHECK(vertex_flow(v, t, s) == to_int(r->color(v)));
    }
    const Tiling tx = base_tiling(r, 0);
    for (CellId v : s.interior_vertices()) CHECK(vertex_flow(v, tx, s) == 0);
    CHECK_THROWS_AS(vertex_flow(r->find({0, 0, 2}), t, s), SurfaceError);
}
