#include "tritile/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tritile {

namespace {

Vec3 read_vec3(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 3) throw FormatError(std::string(what) + ": expected [x, y, z]");
    Vec3 v{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!j[i].is_number_integer()) throw FormatError(std::string(what) + ": coordinates must be integers");
        v[i] = j[i].get<std::int32_t>();
    }
    return v;
}

Json vec3_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

int parse_normal(const Json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        for (int d = 0; d < dir::count; ++d) {
            if (s == dir::name(d)) return d;
        }
    }
    throw FormatError("normal must be one of +x, -x, +y, -y, +z, -z");
}

}  // namespace

Json region_to_json(const Region& r) {
    Json j;
    j["kind"] = to_string(r.kind());
    const Vec3& e = r.extent();
    switch (r.kind()) {
        case RegionKind::box: j["dims"] = vec3_json(e); break;
        case RegionKind::torus: j["periods"] = vec3_json(e); break;
        case RegionKind::voxels: {
            Json cells = Json::array();
            for (const Vec3& p : r.cells()) cells.push_back(vec3_json(p));
            j["cells"] = std::move(cells);
            j["parity"] = r.parity();
            break;
        }
    }
    return j;
}

RegionPtr region_from_json(const Json& j) {
    const Json& kind = field(j, "kind");
    if (!kind.is_string()) throw FormatError("region kind must be a string");
    const std::string k = kind.get<std::string>();
    if (k == "box") {
        const Vec3 d = read_vec3(field(j, "dims"), "dims");
        return build_box(d[0], d[1], d[2]);
    }
    if (k == "torus") {
        const Vec3 p = read_vec3(field(j, "periods"), "periods");
        return build_torus(p[0], p[1], p[2]);
    }
    if (k == "voxels") {
        const Json& cells = field(j, "cells");
        if (!cells.is_array()) throw FormatError("cells must be a list");
        std::vector<Vec3> pts;
        for (const Json& c : cells) pts.push_back(read_vec3(c, "cell"));
        int parity = 0;
        if (j.contains("parity")) {
            if (!j["parity"].is_number_integer()) throw FormatError("parity must be 0 or 1");
            parity = j["parity"].get<int>();
            if (parity != 0 && parity != 1) throw FormatError("parity must be 0 or 1");
        }
        return build_voxel_region(std::move(pts), parity);
    }
    throw FormatError("unknown region kind \"" + k + "\"");
}

Dimer dimer_between(const Region& r, const Vec3& white, const Vec3& black) {
    const CellId w = r.find(white);
    const CellId b = r.find(black);
    auto where = [](const Vec3& p) {
        return "(" + std::to_string(p[0]) + "," + std::to_string(p[1]) + "," + std::to_string(p[2]) + ")";
    };
    if (w == kNoCell) throw TilingError(kNoCell, "cell outside region " + where(white));
    if (b == kNoCell) throw TilingError(kNoCell, "cell outside region " + where(black));
    if (r.color(w) != Color::white) throw TilingError(w, "first cell of dimer is not white " + where(white));
    if (r.color(b) != Color::black) throw TilingError(b, "second cell of dimer is not black " + where(black));
    for (int d = 0; d < dir::count; ++d) {
        if (r.neighbor(w, d) == b && r.is_representative_step(w, d)) return {w, b, d};
    }
    throw TilingError(w, "cells " + where(white) + " and " + where(black) + " are not adjacent");
}

Json tiling_to_json(const Tiling& t) {
    const Region& r = t.region();
    Json dimers = Json::array();
    // Cell ids follow lexicographic coordinate order, so dimers() is canonical.
    for (const Dimer& d : t.dimers()) {
        dimers.push_back(Json::array({vec3_json(r.coords(d.white)), vec3_json(r.coords(d.black))}));
    }
    Json j;
    j["region"] = region_to_json(r);
    j["dimers"] = std::move(dimers);
    return j;
}

Tiling tiling_from_json(const Json& j, const RegionPtr& region) {
    RegionPtr r = region;
    if (j.is_object() && j.contains("region")) {
        RegionPtr embedded = region_from_json(j["region"]);
        if (r && !same_region(*r, *embedded)) throw FormatError("tiling region does not match the given region");
        if (!r) r = std::move(embedded);
    }
    if (!r) throw FormatError("tiling has no region");
    const Json& list = field(j, "dimers");
    if (!list.is_array()) throw FormatError("dimers must be a list");
    std::vector<Dimer> dimers;
    dimers.reserve(list.size());
    for (const Json& d : list) {
        if (!d.is_array() || d.size() != 2) throw FormatError("dimer must be [[wx,wy,wz],[bx,by,bz]]");
        dimers.push_back(dimer_between(*r, read_vec3(d[0], "dimer"), read_vec3(d[1], "dimer")));
    }
    return Tiling::from_dimers(r, dimers);
}

std::string serialize_tiling(const Tiling& t) { return tiling_to_json(t).dump() + "\n"; }

Tiling deserialize_tiling(const std::string& text, const RegionPtr& region) {
    return tiling_from_json(parse_json(text), region);
}

Json surface_to_json(const DiscreteSurface& s) {
    Json out = Json::array();
    for (const Square& q : s.squares()) {
        Json sq;
        sq["center"] = vec3_json(q.center2);
        sq["normal"] = dir::name(q.normal);
        out.push_back(std::move(sq));
    }
    return out;
}

DiscreteSurface surface_from_json(const Json& j, const RegionPtr& region) {
    if (!j.is_array()) throw FormatError("surface must be a list of squares");
    std::vector<Square> squares;
    for (const Json& q : j) squares.push_back({read_vec3(field(q, "center"), "center"), parse_normal(field(q, "normal"))});
    return DiscreteSurface(region, std::move(squares));
}

Json invariant_report(const Tiling& t) {
    Json j;
    if (t.region().kind() == RegionKind::voxels) {
        j["flux"] = nullptr;
        j["modulus"] = nullptr;
        j["twist"] = nullptr;
        return j;
    }
    j["flux"] = flux(t);
    j["modulus"] = modulus(t);
    if (t.region().kind() == RegionKind::box) {
        j["twist"] = twist(t);
    } else {
        j["twist"] = nullptr;
    }
    return j;
}

Json coquad_to_json(const CoquadSurface& s) {
    Json vertices = Json::array();
    for (int v = 0; v < static_cast<int>(s.vertex_count()); ++v) {
        vertices.push_back({{"id", v}, {"color", s.color(v) == Color::black ? "black" : "white"}});
    }
    Json edges = Json::array();
    for (int e = 0; e < static_cast<int>(s.edge_count()); ++e) {
        const CoquadEdge& ed = s.edge(e);
        edges.push_back({{"id", e}, {"black", ed.black}, {"white", ed.white}, {"left", ed.left}, {"right", ed.right}});
    }
    Json faces = Json::array();
    for (int f = 0; f < static_cast<int>(s.face_count()); ++f) {
        faces.push_back({{"id", f}, {"infinity", f == CoquadSurface::kInfinity}});
    }
    return {{"vertices", vertices}, {"edges", edges}, {"faces", faces}};
}

namespace {

CoquadSurface coquad_from_json_unchecked(const Json& j) {
    const Json& vertices = field(j, "vertices");
    const Json& edges = field(j, "edges");
    const Json& faces = field(j, "faces");
    if (!vertices.is_array() || !edges.is_array() || !faces.is_array()) {
        throw FormatError("vertices, edges and faces must be lists");
    }
    std::vector<Color> colors(vertices.size(), Color::black);
    for (const Json& v : vertices) {
        const auto id = field(v, "id").get<long>();
        if (id < 0 || static_cast<std::size_t>(id) >= colors.size()) throw FormatError("vertex id out of range");
        const std::string c = field(v, "color").get<std::string>();
        if (c != "black" && c != "white") throw FormatError("vertex color must be black or white");
        colors[static_cast<std::size_t>(id)] = c == "black" ? Color::black : Color::white;
    }
    for (const Json& f : faces) {
        const bool inf = field(f, "infinity").get<bool>();
        if (inf != (field(f, "id").get<long>() == CoquadSurface::kInfinity)) {
            throw FormatError("face 0 and only face 0 must be marked as infinity");
        }
    }
    std::vector<CoquadEdge> list(edges.size());
    for (const Json& e : edges) {
        const auto id = field(e, "id").get<long>();
        if (id < 0 || static_cast<std::size_t>(id) >= list.size()) throw FormatError("edge id out of range");
        list[static_cast<std::size_t>(id)] = {field(e, "black").get<int>(), field(e, "white").get<int>(),
                                              field(e, "left").get<int>(), field(e, "right").get<int>()};
    }
    return CoquadSurface(std::move(colors), std::move(list), static_cast<int>(faces.size()));
}

}  // namespace

CoquadSurface coquad_from_json(const Json& j) {
    try {
        return coquad_from_json_unchecked(j);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed surface description: ") + e.what());
    }
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
}

}  // namespace tritile
