#include "tritile/flux.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

namespace tritile {

namespace {

std::string fmt(const Region& r, CellId c) {
    const Vec3& p = r.coords(c);
    std::ostringstream os;
    os << '(' << p[0] << ',' << p[1] << ',' << p[2] << ')';
    return os.str();
}

std::string fmt(const Vec3& p) {
    std::ostringstream os;
    os << '(' << p[0] << ',' << p[1] << ',' << p[2] << ')';
    return os.str();
}

std::string fmt(const Region& r, const DualEdge& e) {
    return fmt(r, e.lower) + "+" + std::string(1, "xyz"[e.axis]);
}

long long floor_mod(long long v, long long m) {
    const long long q = v % m;
    return q < 0 ? q + m : q;
}

Vec3 wrap2(const Region& r, Vec3 c2) {
    if (auto periods = r.periods()) {
        for (std::size_t a = 0; a < 3; ++a) c2[a] = static_cast<std::int32_t>(floor_mod(c2[a], 2LL * (*periods)[a]));
    }
    return c2;
}

void require_kind(const Region& r, RegionKind kind, const char* what) {
    if (r.kind() != kind) throw UnsupportedRegion(std::string(what) + " (region kind " + to_string(r.kind()) + ")");
}

}  // namespace

DualEdge dual_edge(const Region& r, CellId c, int d) {
    if (dir::sign(d) > 0) return {c, dir::axis(d)};
    return {r.neighbor(c, d), dir::axis(d)};
}

// ---------------------------------------------------------------------------
// DiscreteSurface

DiscreteSurface::DiscreteSurface(RegionPtr region, std::vector<Square> squares)
    : region_(std::move(region)), squares_(std::move(squares)) {
    const Region& r = *region_;
    std::map<DualEdge, int> multiplicity;
    std::map<DualEdge, int> chain;
    for (Square& sq : squares_) {
        if (sq.normal < 0 || sq.normal >= dir::count) throw SurfaceError("square normal out of range");
        sq.center2 = wrap2(r, sq.center2);
        const auto a = static_cast<std::size_t>(sq.normal_axis());
        const std::size_t b = (a + 1) % 3, c = (a + 2) % 3;
        if (sq.center2[a] % 2 != 0 || sq.center2[b] % 2 == 0 || sq.center2[c] % 2 == 0) {
            throw SurfaceError("square center " + fmt(sq.center2) + " is not a dual square with normal " +
                               dir::name(sq.normal));
        }
        if (!by_center_.emplace(sq.center2, sq.normal).second) {
            throw SurfaceError("square " + fmt(sq.center2) + " listed twice");
        }
        Vec3 lo;
        lo[a] = sq.center2[a] / 2;
        lo[b] = (sq.center2[b] - 1) / 2;
        lo[c] = (sq.center2[c] - 1) / 2;
        const CellId p00 = r.find(lo);
        const CellId p10 = p00 == kNoCell ? kNoCell : r.neighbor(p00, dir::make(static_cast<int>(b), +1));
        const CellId p01 = p00 == kNoCell ? kNoCell : r.neighbor(p00, dir::make(static_cast<int>(c), +1));
        const CellId p11 = p10 == kNoCell ? kNoCell : r.neighbor(p10, dir::make(static_cast<int>(c), +1));
        if (p00 == kNoCell || p10 == kNoCell || p01 == kNoCell || p11 == kNoCell) {
            throw SurfaceError("square " + fmt(sq.center2) + " has a corner outside the region");
        }
        // Counterclockwise about +a: p00 -> p10 -> p11 -> p01 -> p00.
        const int orient = dir::sign(sq.normal);
        const std::array<std::pair<DualEdge, int>, 4> sides{{
            {{p00, static_cast<int>(b)}, +orient},
            {{p10, static_cast<int>(c)}, +orient},
            {{p01, static_cast<int>(b)}, -orient},
            {{p00, static_cast<int>(c)}, -orient},
        }};
        for (const auto& [e, coef] : sides) {
            if (++multiplicity[e] > 2) {
                throw SurfaceError("dual edge " + fmt(r, e) + " is shared by more than two squares");
            }
            chain[e] += coef;
            edges_.insert(e);
        }
        for (CellId v : {p00, p10, p01, p11}) vertices_.insert(v);
    }
    for (const auto& [e, coef] : chain) {
        if (coef == 0) continue;
        if (coef != 1 && coef != -1) {
            throw SurfaceError("incoherent orientation along dual edge " + fmt(r, e));
        }
        boundary_.emplace(e, coef);
        boundary_vertices_.insert(e.lower);
        boundary_vertices_.insert(r.neighbor(e.lower, dir::make(e.axis, +1)));
    }
    std::set_difference(vertices_.begin(), vertices_.end(), boundary_vertices_.begin(), boundary_vertices_.end(),
                        std::inserter(interior_, interior_.end()));
}

bool DiscreteSurface::contains_square(const Vec3& center2) const {
    return by_center_.count(wrap2(*region_, center2)) != 0;
}

std::optional<int> DiscreteSurface::normal_at(const Vec3& center2) const {
    auto it = by_center_.find(wrap2(*region_, center2));
    if (it == by_center_.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------
// Flux through surfaces

int vertex_flow(CellId v, const Tiling& t, const DiscreteSurface& s) {
    const Region& r = t.region();
    if (!s.interior_vertices().count(v)) {
        throw SurfaceError("vertex " + fmt(r, v) + " is not an interior vertex of the surface");
    }
    const int d = t.step(v);
    if (s.contains_edge(dual_edge(r, v, d))) return 0;

    // Label the eight octants around v as above (+1) or below (-1) the
    // surface. Octant o has sign -1 along axis a iff bit a of o is set; the
    // octants o and o ^ (1 << a) are separated by the quarter plane normal to a.
    const Vec3 v2{2 * r.coords(v)[0], 2 * r.coords(v)[1], 2 * r.coords(v)[2]};
    auto octant_sign = [](int o, int a) { return ((o >> a) & 1) ? -1 : +1; };
    auto face_normal = [&](int o, int a) -> std::optional<int> {
        Vec3 c2 = v2;
        for (int k = 0; k < 3; ++k) {
            if (k != a) c2[static_cast<std::size_t>(k)] += octant_sign(o, k);
        }
        auto n = s.normal_at(c2);
        if (n && dir::axis(*n) != a) return std::nullopt;
        return n;
    };
    std::array<int, 8> label{};
    bool seeded = false;
    for (int o = 0; o < 8 && !seeded; ++o) {
        for (int a = 0; a < 3 && !seeded; ++a) {
            if (auto n = face_normal(o, a)) {
                label[static_cast<std::size_t>(o)] = octant_sign(o, a) == dir::sign(*n) ? +1 : -1;
                seeded = true;
            }
        }
    }
    if (!seeded) throw std::logic_error("vertex_flow: interior vertex without incident squares");
    std::array<int, 8> queue{};
    int head = 0, tail = 0;
    queue[static_cast<std::size_t>(tail++)] = std::find_if(label.begin(), label.end(), [](int l) { return l != 0; }) - label.begin();
    while (head < tail) {
        const int o = queue[static_cast<std::size_t>(head++)];
        for (int a = 0; a < 3; ++a) {
            const int p = o ^ (1 << a);
            int expected = label[static_cast<std::size_t>(o)];
            if (auto n = face_normal(o, a)) {
                const int mine = octant_sign(o, a) == dir::sign(*n) ? +1 : -1;
                if (mine != label[static_cast<std::size_t>(o)]) {
                    throw SurfaceError("incoherent surface orientation at vertex " + fmt(r, v));
                }
                expected = -mine;
            }
            if (label[static_cast<std::size_t>(p)] == 0) {
                label[static_cast<std::size_t>(p)] = expected;
                queue[static_cast<std::size_t>(tail++)] = p;
            } else if (label[static_cast<std::size_t>(p)] != expected) {
                throw SurfaceError("surface does not separate the neighborhood of vertex " + fmt(r, v));
            }
        }
    }
    const int axis = dir::axis(d);
    const int o = dir::sign(d) > 0 ? 0 : (1 << axis);
    return to_int(r.color(v)) * label[static_cast<std::size_t>(o)];
}

std::int64_t flux_through_surface(const Tiling& t, const DiscreteSurface& s) {
    const Region& r = t.region();
    for (CellId v : s.boundary_vertices()) {
        if (!s.boundary().count(dual_edge(r, v, t.step(v)))) {
            throw SurfaceError("tiling is not tangent to the surface at boundary vertex " + fmt(r, v));
        }
    }
    std::int64_t total = 0;
    for (CellId v : s.interior_vertices()) total += vertex_flow(v, t, s);
    return total;
}

DiscreteSurface closed_box_surface(const RegionPtr& region, const Vec3& corner, const Vec3& dims) {
    const Region& r = *region;
    for (std::size_t a = 0; a < 3; ++a) {
        if (dims[a] < 1) throw SurfaceError("sub-box dimensions must be positive");
        if (auto periods = r.periods(); periods && dims[a] >= (*periods)[a]) {
            throw SurfaceError("sub-box wraps around the torus");
        }
    }
    for (int x = 0; x <= dims[0]; ++x)
        for (int y = 0; y <= dims[1]; ++y)
            for (int z = 0; z <= dims[2]; ++z) {
                const Vec3 p{corner[0] + x, corner[1] + y, corner[2] + z};
                if (r.find(p) == kNoCell) {
                    throw SurfaceError("sub-box touches region boundary: dual vertex " + fmt(p) + " is not a cell");
                }
            }
    std::vector<Square> squares;
    for (int a = 0; a < 3; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        const std::size_t b = (ua + 1) % 3, c = (ua + 2) % 3;
        for (int i = 0; i < dims[b]; ++i) {
            for (int j = 0; j < dims[c]; ++j) {
                Vec3 c2;
                c2[b] = 2 * (corner[b] + i) + 1;
                c2[c] = 2 * (corner[c] + j) + 1;
                c2[ua] = 2 * corner[ua];
                squares.push_back({c2, dir::make(a, -1)});
                c2[ua] = 2 * (corner[ua] + dims[ua]);
                squares.push_back({c2, dir::make(a, +1)});
            }
        }
    }
    return DiscreteSurface(region, std::move(squares));
}

DiscreteSurface cutting_surface(const RegionPtr& region, int axis, int level) {
    const Region& r = *region;
    require_kind(r, RegionKind::torus, "cutting surfaces exist only on tori");
    if (axis < 0 || axis > 2) throw std::invalid_argument("axis must be 0, 1 or 2");
    const auto a = static_cast<std::size_t>(axis);
    const std::size_t b = (a + 1) % 3, c = (a + 2) % 3;
    std::vector<Square> squares;
    for (int i = 0; i < r.extent()[b]; ++i) {
        for (int j = 0; j < r.extent()[c]; ++j) {
            Vec3 c2;
            c2[a] = 2 * level;
            c2[b] = 2 * i + 1;
            c2[c] = 2 * j + 1;
            squares.push_back({c2, dir::make(axis, +1)});
        }
    }
    return DiscreteSurface(region, std::move(squares));
}

// ---------------------------------------------------------------------------
// Flux and modulus

namespace {

// +1 / -1 when stepping from c in direction d crosses the plane between the
// last layer and layer 0 in the +axis / -axis direction.
int wrap_crossing(const Region& r, CellId c, int d, int axis) {
    if (dir::axis(d) != axis) return 0;
    const auto a = static_cast<std::size_t>(axis);
    const int coord = r.coords(c)[a];
    if (dir::sign(d) > 0 && coord == r.extent()[a] - 1) return +1;
    if (dir::sign(d) < 0 && coord == 0) return -1;
    return 0;
}

}  // namespace

std::vector<std::int64_t> flux(const Tiling& t) {
    const Region& r = t.region();
    if (r.kind() == RegionKind::box) return {};
    require_kind(r, RegionKind::torus, "flux unsupported for this region kind");
    const Tiling base = base_tiling(t.region_ptr(), 0);
    const CycleSystem cycles = diff_cycles(t, base);
    std::vector<std::int64_t> out(3, 0);
    for (const Cycle& cyc : cycles.cycles) {
        for (std::size_t i = 0; i < cyc.cells.size(); ++i) {
            for (int a = 0; a < 3; ++a) out[static_cast<std::size_t>(a)] += wrap_crossing(r, cyc.cells[i], cyc.steps[i], a);
        }
    }
    return out;
}

std::vector<std::int64_t> flux_from_dimers(const Tiling& t, const Tiling& base) {
    const Region& r = t.region();
    if (r.kind() == RegionKind::box) return {};
    require_kind(r, RegionKind::torus, "flux unsupported for this region kind");
    std::vector<std::int64_t> out(3, 0);
    for (int a = 0; a < 3; ++a) {
        for (const Dimer& d : t.dimers()) out[static_cast<std::size_t>(a)] += wrap_crossing(r, d.white, d.direction, a);
        for (const Dimer& d : base.dimers()) out[static_cast<std::size_t>(a)] -= wrap_crossing(r, d.white, d.direction, a);
    }
    return out;
}

std::int64_t modulus(const Tiling& t) {
    const Region& r = t.region();
    if (r.kind() == RegionKind::box) return 0;
    require_kind(r, RegionKind::torus, "flux unsupported for this region kind");
    std::int64_t m = 0;
    for (int a = 0; a < 3; ++a) {
        m = std::gcd(m, std::abs(flux_through_surface(t, cutting_surface(t.region_ptr(), a, 0))));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Twist

std::int64_t twist_quarters(const Tiling& t, int axis) {
    const Region& r = t.region();
    require_kind(r, RegionKind::box, "combinatorial twist requires box");
    if (axis < 0 || axis > 2) throw std::invalid_argument("axis must be 0, 1 or 2");
    const auto u = static_cast<std::size_t>(axis);
    const std::size_t b = (u + 1) % 3, c = (u + 2) % 3;
    const Vec3& ext = r.extent();
    // Column (i, j) of the projection along u; entry per layer: 0 none,
    // otherwise the signed in-plane direction of the dimer covering that cell:
    // +-1 along b, +-2 along c.
    const std::size_t columns = static_cast<std::size_t>(ext[b]) * static_cast<std::size_t>(ext[c]);
    std::vector<std::int8_t> grid(columns * static_cast<std::size_t>(ext[u]), 0);
    auto slot = [&](const Vec3& p) {
        return (static_cast<std::size_t>(p[b]) * static_cast<std::size_t>(ext[c]) + static_cast<std::size_t>(p[c])) *
                   static_cast<std::size_t>(ext[u]) +
               static_cast<std::size_t>(p[u]);
    };
    for (const Dimer& d : t.dimers()) {
        const auto a = static_cast<std::size_t>(d.axis());
        if (a == u) continue;
        const std::int8_t code = static_cast<std::int8_t>((a == b ? 1 : 2) * dir::sign(d.direction));
        grid[slot(r.coords(d.white))] = code;
        grid[slot(r.coords(d.black))] = code;
    }
    // det[v(d'), v(d), e_u] for d below d' in one column:
    //   d along b (sign s), d' along c (sign s'): -s s'
    //   d along c (sign s), d' along b (sign s'): +s s'
    std::int64_t total = 0;
    for (std::size_t col = 0; col < columns; ++col) {
        std::int64_t below_b = 0, below_c = 0;
        const std::int8_t* column = grid.data() + col * static_cast<std::size_t>(ext[u]);
        for (int layer = 0; layer < ext[u]; ++layer) {
            const int code = column[layer];
            if (code == 0) continue;
            if (code == 1 || code == -1) {
                total += code * below_c;
                below_b += code;
            } else {
                const int s = code / 2;
                total -= s * below_b;
                below_c += s;
            }
        }
    }
    return total;
}

std::int64_t twist(const Tiling& t, int axis) {
    const std::int64_t q = twist_quarters(t, axis);
    if (q % 4 != 0) {
        std::ostringstream os;
        os << "internal consistency failure: twist along " << "xyz"[axis] << " is " << q << "/4";
        throw std::logic_error(os.str());
    }
    return q / 4;
}

RelativeTwist relative_twist(const Tiling& t1, const Tiling& t0, const MoveGraph* graph) {
    const Region& r = t1.region();
    if (&r != &t0.region() && !same_region(r, t0.region())) {
        throw std::invalid_argument("relative_twist: tilings belong to different regions");
    }
    if (r.kind() == RegionKind::box) return {twist(t1) - twist(t0), 0};

    std::int64_t m = 0;
    if (r.kind() == RegionKind::torus) {
        if (flux(t1) != flux(t0)) throw std::invalid_argument("relative_twist: tilings have different flux");
        m = modulus(t0);
    }
    if (!graph || graph->moves() != MoveSet::flip_trit) {
        throw UnsupportedRegion("relative twist on non-box regions needs the enumerated flip+trit move graph");
    }
    const long i0 = graph->index_of(t0), i1 = graph->index_of(t1);
    if (i0 < 0 || i1 < 0) throw std::invalid_argument("relative_twist: tiling not in the move graph");
    const TritLabeling labels = bfs_trit_labeling(*graph, static_cast<std::size_t>(i0));
    if (!labels.reached[static_cast<std::size_t>(i1)]) {
        throw std::invalid_argument("relative_twist: tilings are not connected by flips and trits");
    }
    if (!labels.consistent && (m == 0 || labels.discrepancy_gcd % m != 0)) {
        throw std::logic_error("relative_twist: trit labeling is inconsistent (cycle defect " +
                               std::to_string(labels.discrepancy_gcd) + ", modulus " + std::to_string(m) + ")");
    }
    std::int64_t value = labels.label[static_cast<std::size_t>(i1)];
    if (m > 0) value = ((value % m) + m) % m;
    return {value, m};
}

// ---------------------------------------------------------------------------
// Seifert surface predicates

std::map<DualEdge, int> cycle_chain(const Tiling& t1, const Tiling& t0) {
    const Region& r = t1.region();
    std::map<DualEdge, int> chain;
    for (const Cycle& cyc : diff_cycles(t1, t0).cycles) {
        if (cyc.trivial()) continue;
        for (std::size_t i = 0; i < cyc.cells.size(); ++i) {
            chain[dual_edge(r, cyc.cells[i], cyc.steps[i])] += dir::sign(cyc.steps[i]);
        }
    }
    return chain;
}

SurfacePredicates surface_predicates(const Tiling& t0, const Tiling& t1, const DiscreteSurface& s) {
    const Region& r = t0.region();
    const auto chain = cycle_chain(t1, t0);
    std::vector<DualEdge> missing, extra;
    for (const auto& [e, coef] : chain) {
        if (!s.boundary().count(e)) missing.push_back(e);
    }
    for (const auto& [e, coef] : s.boundary()) {
        if (!chain.count(e)) extra.push_back(e);
    }
    if (!missing.empty() || !extra.empty()) {
        std::ostringstream os;
        os << "surface boundary differs from the nontrivial cycles of t1 - t0; missing:";
        for (const auto& e : missing) os << ' ' << fmt(r, e);
        os << "; extra:";
        for (const auto& e : extra) os << ' ' << fmt(r, e);
        throw SurfaceError(os.str());
    }
    SurfacePredicates p;
    long balance = 0;
    for (CellId v : s.interior_vertices()) balance += to_int(r.color(v));
    p.balanced = balance == 0;
    p.zero_flux = flux_through_surface(t0, s) == 0 && flux_through_surface(t1, s) == 0;
    auto tangent_to = [&](const Tiling& t) {
        return std::all_of(s.vertices().begin(), s.vertices().end(),
                           [&](CellId v) { return s.contains_edge(dual_edge(r, v, t.step(v))); });
    };
    p.tangent = tangent_to(t0) && tangent_to(t1);
    if (p.tangent && !(p.balanced && p.zero_flux)) {
        throw std::logic_error("tangent surface that is not balanced and zero-flux");
    }
    return p;
}

namespace {

// First orientation assignment whose oriented boundary equals `target`.
DiscreteSurface orient_to(const RegionPtr& region, std::vector<Square> squares, const std::map<DualEdge, int>& target) {
    const std::size_t n = squares.size();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        for (std::size_t i = 0; i < n; ++i) {
            const int axis = squares[i].normal_axis();
            squares[i].normal = dir::make(axis, (mask >> i) & 1 ? -1 : +1);
        }
        try {
            DiscreteSurface s(region, squares);
            if (s.boundary() == target) return s;
        } catch (const SurfaceError&) {
        }
    }
    throw SurfaceError("no orientation of the squares bounds the difference cycle");
}

}  // namespace

DiscreteSurface flip_surface(const Tiling& t, const FlipMove& m) {
    const Region& r = t.region();
    Vec3 c2{2 * r.coords(m.anchor)[0], 2 * r.coords(m.anchor)[1], 2 * r.coords(m.anchor)[2]};
    for (int a = 0; a < 3; ++a) {
        if (a != m.normal_axis) c2[static_cast<std::size_t>(a)] += 1;
    }
    return orient_to(t.region_ptr(), {{c2, dir::make(m.normal_axis, +1)}}, cycle_chain(apply_flip(t, m), t));
}

DiscreteSurface trit_surface(const Tiling& t, const TritMove& m, int corner_choice) {
    const Region& r = t.region();
    std::set<CellId> moved;
    for (const Dimer& d : m.removed) {
        moved.insert(d.white);
        moved.insert(d.black);
    }
    std::vector<int> free_offsets;
    for (int o = 0; o < 8; ++o) {
        const Vec3 q{m.corner[0] + (o & 1), m.corner[1] + ((o >> 1) & 1), m.corner[2] + ((o >> 2) & 1)};
        const CellId c = r.find(q);
        if (c == kNoCell || !moved.count(c)) free_offsets.push_back(o);
    }
    if (free_offsets.size() != 2 || (free_offsets[0] ^ free_offsets[1]) != 7) {
        throw SurfaceError("trit cube does not leave an antipodal pair untouched");
    }
    const int o = free_offsets[static_cast<std::size_t>(corner_choice != 0)];
    const Vec3 q{m.corner[0] + (o & 1), m.corner[1] + ((o >> 1) & 1), m.corner[2] + ((o >> 2) & 1)};
    if (r.find(q) == kNoCell) throw SurfaceError("untouched trit corner " + fmt(q) + " is outside the region");
    std::vector<Square> squares;
    for (int a = 0; a < 3; ++a) {
        Vec3 c2{2 * q[0], 2 * q[1], 2 * q[2]};
        for (int k = 0; k < 3; ++k) {
            if (k == a) continue;
            c2[static_cast<std::size_t>(k)] += ((o >> k) & 1) ? -1 : +1;
        }
        squares.push_back({c2, dir::make(a, +1)});
    }
    return orient_to(t.region_ptr(), std::move(squares), cycle_chain(apply_trit(t, m), t));
}

}  // namespace tritile
