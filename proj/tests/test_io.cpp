#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "tritile/flux.hpp"
#include "tritile/harness.hpp"
#include "tritile/height.hpp"
#include "tritile/io.hpp"

using namespace tritile;

TEST_CASE("tiling round trip preserves hash and text") {
    for (const RegionPtr& r : {build_box(3, 3, 2), build_torus(2, 2, 4)}) {
        for (const Tiling& t : enumerate_tilings(r)) {
            const std::string text = serialize_tiling(t);
            const Tiling back = deserialize_tiling(text);
            CHECK(back == t);
            CHECK(back.hash() == t.hash());
            CHECK(serialize_tiling(back) == text);
            CHECK(deserialize_tiling(text, r) == t);
        }
    }
}

TEST_CASE("tiling documents are validated") {
    const RegionPtr r = build_box(2, 2, 1);
    Json j = tiling_to_json(enumerate_tilings(r).front());

    Json twice = j;
    twice["dimers"][1] = twice["dimers"][0];
    CHECK_THROWS_WITH_AS(tiling_from_json(twice), doctest::Contains("cell covered twice"), TilingError);

    Json missing = j;
    missing["dimers"].erase(1);
    CHECK_THROWS_WITH_AS(tiling_from_json(missing), doctest::Contains("cell uncovered"), TilingError);

    CHECK_THROWS_WITH_AS(dimer_between(*build_box(4, 4, 4), {1, 0, 0}, {0, 1, 1}), doctest::Contains("not adjacent"),
                         TilingError);

    Json outside = j;
    outside["dimers"][0] = Json::parse("[[5,0,0],[6,0,0]]");
    CHECK_THROWS_WITH_AS(tiling_from_json(outside), doctest::Contains("outside"), TilingError);

    Json wrong_color = j;
    wrong_color["dimers"][0] = Json::parse("[[0,0,0],[1,0,0]]");
    CHECK_THROWS_WITH_AS(tiling_from_json(wrong_color), doctest::Contains("not white"), TilingError);

    CHECK_THROWS_AS(tiling_from_json(j, build_box(2, 1, 2)), FormatError);
    CHECK_THROWS_AS(deserialize_tiling("{\"region\": "), FormatError);
    CHECK_THROWS_AS(deserialize_tiling("[1,2,3]"), FormatError);
}

TEST_CASE("region documents") {
    for (const RegionPtr& r : {build_box(3, 3, 2), build_torus(4, 2, 6)}) {
        CHECK(same_region(*region_from_json(region_to_json(*r)), *r));
    }
    const RegionPtr vox = build_voxel_region({{1, 0, 0}, {0, 0, 0}, {0, 1, 0}, {1, 1, 0}}, 1);
    const Json j = region_to_json(*vox);
    CHECK(j["kind"] == "voxels");
    CHECK(j["parity"] == 1);
    // Cells are written in canonical sorted order.
    CHECK(j["cells"][0] == Json::parse("[0,0,0]"));
    CHECK(j["cells"][3] == Json::parse("[1,1,0]"));
    CHECK(same_region(*region_from_json(j), *vox));

    CHECK_THROWS_AS(region_from_json(Json::parse(R"({"kind":"sphere"})")), FormatError);
    CHECK_THROWS_AS(region_from_json(Json::parse(R"({"kind":"box","dims":[2,2]})")), FormatError);
    CHECK_THROWS_AS(region_from_json(Json::parse(R"({"kind":"box","dims":[3,3,3]})")), RegionError);
}

TEST_CASE("surface documents") {
    const RegionPtr r = build_torus(4, 4, 4);
    const DiscreteSurface s = cutting_surface(r, 1);
    const Json j = surface_to_json(s);
    const DiscreteSurface back = surface_from_json(j, r);
    CHECK(back.squares() == s.squares());
    CHECK(surface_to_json(back) == j);

    const DiscreteSurface box = closed_box_surface(build_box(4, 4, 4), {0, 0, 0}, {2, 2, 2});
    CHECK(surface_from_json(surface_to_json(box), build_box(4, 4, 4)).squares() == box.squares());
}

TEST_CASE("coquad documents") {
    const CoquadSurface s = build_planar_surface({{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 0}, {2, 1}});
    const Json j = coquad_to_json(s);
    const CoquadSurface back = coquad_from_json(j);
    CHECK(back.edges() == s.edges());
    CHECK(back.vertex_count() == s.vertex_count());
    CHECK(back.face_count() == s.face_count());
    CHECK(coquad_to_json(back) == j);

    CHECK_THROWS_AS(coquad_from_json(Json::parse(R"({"vertices": 3})")), FormatError);
    Json bad = j;
    bad["edges"][0]["left"] = 99;
    CHECK_THROWS_AS(coquad_from_json(bad), CoquadError);
}

TEST_CASE("invariant reports") {
    const Json box = invariant_report(base_tiling(build_box(3, 3, 2), 2));
    CHECK(box["twist"] == 0);
    CHECK(box["modulus"] == 0);
    CHECK(box["flux"].empty());

    const RegionPtr tor = build_torus(4, 4, 4);
    const Json mixed = invariant_report(mixed_column_tiling(tor));
    CHECK(mixed["flux"] == Json::parse("[-8,0,0]"));
    CHECK(mixed["modulus"] == 16);
    CHECK(mixed["twist"].is_null());

    const Json vox = invariant_report(base_tiling(build_voxel_region({{0, 0, 0}, {1, 0, 0}}), 0));
    CHECK(vox["flux"].is_null());
    CHECK(vox["twist"].is_null());
}

TEST_CASE("reading files") {
    const std::string path = "tritile_io_test.json";
    {
        std::ofstream out(path);
        out << serialize_tiling(base_tiling(build_box(2, 2, 2), 0));
    }
    const Json j = read_json_file(path);
    CHECK(tiling_from_json(j) == base_tiling(build_box(2, 2, 2), 0));
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_json_file("no/such/file.json"), FormatError);
    CHECK_THROWS_AS(parse_json("{oops}"), FormatError);
}
