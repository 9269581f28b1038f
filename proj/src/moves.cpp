#include "tritile/moves.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>

#include "tritile/parallel.hpp"

namespace tritile {

namespace {

// Dimer for the geometric step d from u, or nullopt when that step is not the
// representative edge of the pair (period-2 torus axes carry two edges).
std::optional<Dimer> geometric_dimer(const Region& r, CellId u, int d) {
    const CellId v = r.neighbor(u, d);
    if (v == kNoCell || !r.is_representative_step(u, d)) return std::nullopt;
    if (r.color(u) == Color::white) return Dimer{u, v, d};
    return Dimer{v, u, dir::opposite(d)};
}

// Direction from cube corner hu to the adjacent corner hv.
int geometric_step(int hu, int hv) {
    const int axis = std::countr_zero(static_cast<unsigned>(hu ^ hv));
    return dir::make(axis, (hv >> axis) & 1 ? +1 : -1);
}

CellId step_to(const Region& r, CellId c, int axis) {
    return c == kNoCell ? kNoCell : r.neighbor(c, dir::make(axis, +1));
}

}  // namespace

int trit_sign(int corner, Color corner_color, int winding) {
    // The hexagon order is right-handed around o -> o^7 for o = 0; each
    // reflected axis flips the handedness.
    const int handedness = (std::popcount(static_cast<unsigned>(corner)) % 2 == 0) ? 1 : -1;
    return -(winding * handedness * to_int(corner_color));
}

const char* to_string(MoveSet s) { return s == MoveSet::flip ? "flip" : "flip+trit"; }

std::vector<FlipMove> find_flips(const Tiling& t) {
    const Region& r = t.region();
    std::vector<FlipMove> out;
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    for (CellId c = 0; c < static_cast<CellId>(r.size()); ++c) {
        for (int a = 0; a < 3; ++a) {
            for (int b = a + 1; b < 3; ++b) {
                const CellId ca = step_to(r, c, a);
                const CellId cb = step_to(r, c, b);
                const CellId cab = step_to(r, ca, b);
                if (ca == kNoCell || cb == kNoCell || cab == kNoCell) continue;
                const int pa = dir::make(a, +1), pb = dir::make(b, +1);
                FlipMove m;
                std::optional<Dimer> in0, in1;
                if (t.step(c) == pa && t.step(cb) == pa) {
                    in0 = geometric_dimer(r, c, pb);
                    in1 = geometric_dimer(r, ca, pb);
                    m.removed = {t.dimer_at(c), t.dimer_at(cb)};
                } else if (t.step(c) == pb && t.step(ca) == pb) {
                    in0 = geometric_dimer(r, c, pa);
                    in1 = geometric_dimer(r, cb, pa);
                    m.removed = {t.dimer_at(c), t.dimer_at(ca)};
                } else {
                    continue;
                }
                if (!in0 || !in1) continue;
                m.inserted = {*in0, *in1};
                const std::pair<std::uint64_t, std::uint64_t> key = std::minmax(dimer_code(m.removed[0]), dimer_code(m.removed[1]));
                if (!seen.insert(key).second) continue;  // period-2 tori revisit slabs
                m.anchor = c;
                m.normal_axis = 3 - a - b;
                out.push_back(m);
            }
        }
    }
    return out;
}

Tiling apply_flip(const Tiling& t, const FlipMove& m) { return t.with_dimers(m.removed, m.inserted); }

std::vector<TritMove> find_trits(const Tiling& t) {
    const Region& r = t.region();
    std::set<Vec3> corners;
    for (const Vec3& q : r.cells()) {
        for (int i = 0; i < 8; ++i) {
            corners.insert(r.wrap({q[0] - (i & 1), q[1] - ((i >> 1) & 1), q[2] - ((i >> 2) & 1)}));
        }
    }
    std::vector<TritMove> out;
    std::set<std::array<std::uint64_t, 3>> seen;
    for (const Vec3& p : corners) {
        // cube[o] is the cell at p + (o&1, (o>>1)&1, (o>>2)&1).
        std::array<CellId, 8> cube;
        for (int o = 0; o < 8; ++o) cube[static_cast<std::size_t>(o)] = r.find({p[0] + (o & 1), p[1] + ((o >> 1) & 1), p[2] + ((o >> 2) & 1)});
        for (int o = 0; o < 4; ++o) {
            const int anti = o ^ 7;
            // Hexagon around the antipodal pair (o, anti).
            const std::array<int, 6> hex{o ^ 1, o ^ 3, o ^ 2, o ^ 6, o ^ 4, o ^ 5};
            bool inside = true;
            for (int h : hex) inside = inside && cube[static_cast<std::size_t>(h)] != kNoCell;
            if (!inside) continue;
            if (cube[static_cast<std::size_t>(o)] == kNoCell && cube[static_cast<std::size_t>(anti)] == kNoCell) continue;
            for (int parity = 0; parity < 2; ++parity) {
                bool present = true;
                for (int e = parity; e < 6; e += 2) {
                    const CellId u = cube[static_cast<std::size_t>(hex[static_cast<std::size_t>(e)])];
                    const int hu = hex[static_cast<std::size_t>(e)], hv = hex[static_cast<std::size_t>((e + 1) % 6)];
                    present = present && t.step(u) == geometric_step(hu, hv);
                }
                if (!present) continue;
                TritMove m;
                bool valid = true;
                for (int e = 0; e < 6; ++e) {
                    const int hu = hex[static_cast<std::size_t>(e)], hv = hex[static_cast<std::size_t>((e + 1) % 6)];
                    const CellId u = cube[static_cast<std::size_t>(hu)];
                    const int axis = std::countr_zero(static_cast<unsigned>(hu ^ hv));
                    const std::optional<Dimer> d = geometric_dimer(r, u, geometric_step(hu, hv));
                    if (!d) {
                        valid = false;
                        break;
                    }
                    if ((e % 2) == parity) {
                        m.removed[static_cast<std::size_t>(axis)] = *d;
                    } else {
                        m.inserted[static_cast<std::size_t>(axis)] = *d;
                    }
                }
                if (!valid) continue;
                const std::array<std::uint64_t, 3> key{dimer_code(m.removed[0]), dimer_code(m.removed[1]),
                                                       dimer_code(m.removed[2])};
                if (!seen.insert(key).second) continue;
                m.corner = p;
                const int winding = r.color(cube[static_cast<std::size_t>(hex[static_cast<std::size_t>(parity)])]) == Color::white ? 1 : -1;
                const Vec3 oc{p[0] + (o & 1), p[1] + ((o >> 1) & 1), p[2] + ((o >> 2) & 1)};
                const Color ocolor = ((oc[0] + oc[1] + oc[2] + r.parity()) & 1) == 0 ? Color::black : Color::white;
                m.sign = trit_sign(o, ocolor, winding);
                out.push_back(m);
            }
        }
    }
    return out;
}

Tiling apply_trit(const Tiling& t, const TritMove& m) { return t.with_dimers(m.removed, m.inserted); }

// ---------------------------------------------------------------------------

MoveGraph::MoveGraph(std::vector<Tiling> tilings, MoveSet moves) : tilings_(std::move(tilings)), moves_(moves) {
    const std::size_t n = tilings_.size();
    index_.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        auto [lo, hi] = index_.equal_range(tilings_[i].hash());
        for (auto it = lo; it != hi; ++it) {
            if (tilings_[it->second] == tilings_[i]) throw std::invalid_argument("MoveGraph: duplicate tiling");
            ++collisions_;
        }
        index_.emplace(tilings_[i].hash(), i);
    }

    adjacency_.assign(n, {});
    parallel_for(n, [&](std::size_t i) {
        const Tiling& t = tilings_[i];
        std::vector<Edge>& out = adjacency_[i];
        auto link = [&](const Tiling& next, int sign) {
            const long j = index_of(next);
            if (j < 0) throw std::logic_error("MoveGraph: move leaves the enumerated set");
            out.push_back({static_cast<std::uint32_t>(j), static_cast<std::int8_t>(sign)});
        };
        for (const FlipMove& m : find_flips(t)) link(apply_flip(t, m), 0);
        if (moves_ == MoveSet::flip_trit) {
            for (const TritMove& m : find_trits(t)) link(apply_trit(t, m), m.sign);
        }
    });

    // Union-find over all edges.
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    auto root = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::uint32_t i = 0; i < n; ++i) {
        for (const Edge& e : adjacency_[i]) {
            const std::uint32_t a = root(i), b = root(e.to);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    component_.assign(n, 0);
    std::vector<long> id_of_root(n, -1);
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::uint32_t rt = root(i);
        if (id_of_root[rt] < 0) {
            id_of_root[rt] = static_cast<long>(component_sizes_.size());
            component_sizes_.push_back(0);
        }
        component_[i] = static_cast<std::uint32_t>(id_of_root[rt]);
        ++component_sizes_[component_[i]];
    }
}

std::size_t MoveGraph::edge_count() const {
    std::size_t total = 0;
    for (const auto& a : adjacency_) total += a.size();
    return total / 2;
}

long MoveGraph::index_of(const Tiling& t) const {
    auto [lo, hi] = index_.equal_range(t.hash());
    for (auto it = lo; it != hi; ++it) {
        if (tilings_[it->second] == t) return static_cast<long>(it->second);
    }
    return -1;
}

std::vector<std::size_t> MoveGraph::component_sizes() const {
    std::vector<std::size_t> sizes = component_sizes_;
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
}

TritLabeling bfs_trit_labeling(const MoveGraph& g, std::size_t base) {
    if (base >= g.size()) throw std::out_of_range("bfs_trit_labeling: base not in graph");
    TritLabeling out;
    out.label.assign(g.size(), 0);
    out.reached.assign(g.size(), 0);
    std::queue<std::size_t> queue;
    queue.push(base);
    out.reached[base] = 1;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop();
        for (const MoveGraph::Edge& e : g.edges(u)) {
            const std::int64_t expected = out.label[u] + e.trit_sign;
            if (!out.reached[e.to]) {
                out.reached[e.to] = 1;
                out.label[e.to] = expected;
                queue.push(e.to);
            } else if (out.label[e.to] != expected) {
                out.consistent = false;
                out.discrepancy_gcd = std::gcd(out.discrepancy_gcd, std::abs(out.label[e.to] - expected));
            }
        }
    }
    return out;
}

}  // namespace tritile
