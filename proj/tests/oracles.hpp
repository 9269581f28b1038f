#pragma once

// Brute-force reference computations. They work from lattice coordinates only
// and share no code with the library beyond Region/Tiling accessors.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "tritile/height.hpp"
#include "tritile/tiling.hpp"

namespace oracle {

using tritile::Vec3;

struct Edge {
    int u, v;
};

/// Count perfect matchings by testing every edge subset of size n/2.
inline std::uint64_t count_matchings_by_subsets(int n, const std::vector<Edge>& edges) {
    const int k = n / 2;
    const int m = static_cast<int>(edges.size());
    std::uint64_t count = 0;
    std::vector<int> pick(static_cast<std::size_t>(k));
    // Iterate k-combinations of m edges in lexicographic order.
    for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
    if (k > m) return 0;
    for (;;) {
        std::vector<char> used(static_cast<std::size_t>(n), 0);
        bool ok = true;
        for (int i : pick) {
            const Edge& e = edges[static_cast<std::size_t>(i)];
            if (used[static_cast<std::size_t>(e.u)] || used[static_cast<std::size_t>(e.v)]) {
                ok = false;
                break;
            }
            used[static_cast<std::size_t>(e.u)] = used[static_cast<std::size_t>(e.v)] = 1;
        }
        count += ok;
        int i = k - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == m - k + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
    return count;
}

/// Grid graph of an L x M x N box (cells indexed arbitrarily).
inline std::pair<int, std::vector<Edge>> box_graph(int L, int M, int N) {
    auto id = [&](int x, int y, int z) { return (x * M + y) * N + z; };
    std::vector<Edge> edges;
    for (int x = 0; x < L; ++x)
        for (int y = 0; y < M; ++y)
            for (int z = 0; z < N; ++z) {
                if (x + 1 < L) edges.push_back({id(x, y, z), id(x + 1, y, z)});
                if (y + 1 < M) edges.push_back({id(x, y, z), id(x, y + 1, z)});
                if (z + 1 < N) edges.push_back({id(x, y, z), id(x, y, z + 1)});
            }
    return {L * M * N, edges};
}

/// Tiling as a map from each cell's coordinates to its partner's coordinates.
inline std::map<Vec3, Vec3> partner_map(const tritile::Tiling& t) {
    std::map<Vec3, Vec3> out;
    const tritile::Region& r = t.region();
    for (tritile::CellId c = 0; c < static_cast<tritile::CellId>(r.size()); ++c) out[r.coords(c)] = r.coords(t.mate(c));
    return out;
}

inline Vec3 add(Vec3 a, int axis, int delta) {
    a[static_cast<std::size_t>(axis)] += delta;
    return a;
}

/// Number of 2x2x1 slabs covered by two parallel dimers, scanning slab
/// positions in a box.
inline int count_flips_by_slab_scan(const tritile::Tiling& t) {
    const auto mate = partner_map(t);
    auto in = [&](const Vec3& p) { return mate.count(p) != 0; };
    int flips = 0;
    for (const auto& [p, q] : mate) {
        (void)q;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                const Vec3 pa = add(p, a, 1), pb = add(p, b, 1), pab = add(pa, b, 1);
                if (!in(pa) || !in(pb) || !in(pab)) continue;
                const bool along_a = mate.at(p) == pa && mate.at(pb) == pab;
                const bool along_b = mate.at(p) == pb && mate.at(pa) == pab;
                flips += along_a || along_b;
            }
    }
    return flips;
}

/// Number of 2x2x2 cubes (in a box) containing three mutually orthogonal
/// dimers that cover six cells and leave two antipodal cells, at least one of
/// which lies in the region.
inline int count_trits_by_cube_scan(const tritile::Tiling& t) {
    const auto mate = partner_map(t);
    std::set<Vec3> corners;
    for (const auto& [p, q] : mate) {
        (void)q;
        for (int i = 0; i < 8; ++i) corners.insert({p[0] - (i & 1), p[1] - ((i >> 1) & 1), p[2] - ((i >> 2) & 1)});
    }
    int trits = 0;
    for (const Vec3& c : corners) {
        std::vector<Vec3> cube;
        for (int i = 0; i < 8; ++i) cube.push_back({c[0] + (i & 1), c[1] + ((i >> 1) & 1), c[2] + ((i >> 2) & 1)});
        auto inside = [&](const Vec3& p) {
            for (const Vec3& q : cube)
                if (q == p) return true;
            return false;
        };
        // Dimers entirely inside the cube.
        std::set<std::pair<Vec3, Vec3>> dimers;
        for (const Vec3& p : cube) {
            auto it = mate.find(p);
            if (it != mate.end() && inside(it->second)) dimers.insert(std::minmax(p, it->second));
        }
        for (const auto& d1 : dimers)
            for (const auto& d2 : dimers)
                for (const auto& d3 : dimers) {
                    if (!(d1 < d2 && d2 < d3)) continue;
                    std::set<int> axes;
                    std::set<Vec3> covered;
                    for (const auto* d : {&d1, &d2, &d3}) {
                        for (int a = 0; a < 3; ++a)
                            if (d->first[static_cast<std::size_t>(a)] != d->second[static_cast<std::size_t>(a)]) axes.insert(a);
                        covered.insert(d->first);
                        covered.insert(d->second);
                    }
                    if (axes.size() != 3 || covered.size() != 6) continue;
                    std::vector<Vec3> rest;
                    for (const Vec3& p : cube)
                        if (!covered.count(p)) rest.push_back(p);
                    const bool antipodal = rest[0][0] != rest[1][0] && rest[0][1] != rest[1][1] && rest[0][2] != rest[1][2];
                    if (antipodal && (mate.count(rest[0]) || mate.count(rest[1]))) ++trits;
                }
    }
    return trits;
}

/// Twist in quarter units by summing over all ordered dimer pairs: d' counts
/// when one of its cells lies strictly above a cell of d along +axis.
inline std::int64_t twist_quarters_by_pairs(const tritile::Tiling& t, int axis) {
    const tritile::Region& r = t.region();
    struct D {
        Vec3 w, b;
        Vec3 v;
    };
    std::vector<D> ds;
    for (const tritile::Dimer& d : t.dimers()) {
        const Vec3 w = r.coords(d.white), b = r.coords(d.black);
        ds.push_back({w, b, {b[0] - w[0], b[1] - w[1], b[2] - w[2]}});
    }
    const auto a = static_cast<std::size_t>(axis);
    auto above = [&](const Vec3& lo, const Vec3& hi) {
        for (std::size_t k = 0; k < 3; ++k)
            if (k != a && lo[k] != hi[k]) return false;
        return hi[a] > lo[a];
    };
    std::int64_t total = 0;
    for (const D& d : ds)
        for (const D& e : ds) {
            const bool meets = above(d.w, e.w) || above(d.w, e.b) || above(d.b, e.w) || above(d.b, e.b);
            if (!meets) continue;
            // det[v(e), v(d), e_axis]
            Vec3 col{0, 0, 0};
            col[a] = 1;
            const Vec3 x = e.v, y = d.v, z = col;
            total += x[0] * (y[1] * z[2] - y[2] * z[1]) - x[1] * (y[0] * z[2] - y[2] * z[0]) + x[2] * (y[0] * z[1] - y[1] * z[0]);
        }
    return total;
}

/// Planar 2D matching count over an explicit cell list, by subsets.
inline std::uint64_t count_planar_matchings(const std::vector<tritile::Cell2>& cells) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = i + 1; j < cells.size(); ++j) {
            const int dx = std::abs(cells[i][0] - cells[j][0]), dy = std::abs(cells[i][1] - cells[j][1]);
            if (dx + dy == 1) edges.push_back({static_cast<int>(i), static_cast<int>(j)});
        }
    return count_matchings_by_subsets(static_cast<int>(cells.size()), edges);
}

/// phi through the plane {axis = 0} of a torus, column by column: each cell in
/// layer 0 contributes color * (+1 if matched to layer 1, -1 if matched across
/// the wrap to the last layer, 0 otherwise). Period-2 axes count both wraps.
inline std::int64_t cut_flux_by_columns(const tritile::Tiling& t, int axis) {
    const tritile::Region& r = t.region();
    const auto a = static_cast<std::size_t>(axis);
    const int period = r.extent()[a];
    std::int64_t total = 0;
    for (tritile::CellId c = 0; c < static_cast<tritile::CellId>(r.size()); ++c) {
        const Vec3& p = r.coords(c);
        if (p[a] != 0) continue;
        const tritile::CellId m = t.mate(c);
        const Vec3& q = r.coords(m);
        bool same_column = true;
        for (std::size_t k = 0; k < 3; ++k)
            if (k != a && q[k] != p[k]) same_column = false;
        if (!same_column) continue;
        const int color = r.color(c) == tritile::Color::black ? 1 : -1;
        if (period == 2) {
            // Both neighbors are the same cell; the representative step decides.
            total += t.step(c) == tritile::dir::make(axis, +1) ? color : -color;
            continue;
        }
        if (q[a] == 1) total += color;
        if (q[a] == period - 1) total -= color;
    }
    return total;
}

inline std::int64_t x_cut_flux_by_columns(const tritile::Tiling& t) { return cut_flux_by_columns(t, 0); }

}  // namespace oracle
