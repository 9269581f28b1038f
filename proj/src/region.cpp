#include "tritile/region.hpp"

#include <algorithm>
#include <bitset>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

namespace tritile {

const char* to_string(RegionKind kind) {
    switch (kind) {
        case RegionKind::box: return "box";
        case RegionKind::torus: return "torus";
        case RegionKind::voxels: return "voxels";
    }
    return "?";
}

const char* dir::name(int d) {
    static constexpr const char* names[] = {"+x", "-x", "+y", "-y", "+z", "-z"};
    return names[d];
}

const char* to_string(Violation v) {
    switch (v) {
        case Violation::empty: return "empty";
        case Violation::duplicate_cell: return "duplicate cell";
        case Violation::coordinate_range: return "coordinate out of range";
        case Violation::unbalanced: return "unbalanced";
        case Violation::disconnected: return "disconnected";
        case Violation::odd_period: return "odd period";
        case Violation::non_manifold_edge: return "non-manifold edge";
        case Violation::non_manifold_vertex: return "non-manifold vertex";
        case Violation::bad_dimensions: return "bad dimensions";
    }
    return "?";
}

namespace {

std::string fmt_point(const Vec3& p) {
    std::ostringstream os;
    os << '(' << p[0] << ',' << p[1] << ',' << p[2] << ')';
    return os.str();
}

std::uint64_t pack(const Vec3& p) {
    auto u = [](std::int32_t v) { return static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) & 0x1FFFFFu; };
    return (u(p[0]) << 42) | (u(p[1]) << 21) | u(p[2]);
}

long long floor_mod(long long v, long long m) {
    long long r = v % m;
    return r < 0 ? r + m : r;
}

// Bit i of an octant mask is the cube p - (i&1, (i>>1)&1, (i>>2)&1) around a
// lattice vertex p. Two octants share a face iff their indices differ in one bit.
bool face_connected(unsigned mask) {
    if (mask == 0) return true;
    unsigned seen = mask & (~mask + 1);
    unsigned frontier = seen;
    while (frontier) {
        unsigned next = 0;
        for (int i = 0; i < 8; ++i) {
            if (!(frontier & (1u << i))) continue;
            for (int b = 0; b < 3; ++b) {
                unsigned j = 1u << (i ^ (1 << b));
                if ((mask & j) && !(seen & j)) next |= j;
            }
        }
        seen |= next;
        frontier = next;
    }
    return seen == mask;
}

const std::bitset<256>& manifold_vertex_patterns() {
    static const std::bitset<256> table = [] {
        std::bitset<256> t;
        for (unsigned m = 1; m < 256; ++m) {
            const unsigned complement = (~m) & 0xFFu;
            t[m] = face_connected(m) && face_connected(complement);
        }
        return t;
    }();
    return table;
}

void check_coordinate(long long v) {
    if (v < std::numeric_limits<std::int32_t>::min() / 8 || v > std::numeric_limits<std::int32_t>::max() / 8) {
        throw RegionError(Violation::coordinate_range, "coordinate " + std::to_string(v) + " out of range");
    }
}

}  // namespace

CellId Region::find(const Vec3& q) const {
    const Vec3 p = wrap(q);
    if (!grid_.empty()) {
        long long idx = 0;
        for (std::size_t a = 0; a < 3; ++a) {
            const long long off = static_cast<long long>(p[a]) - lo_[a];
            if (off < 0 || off >= span_[a]) return kNoCell;
            idx = idx * span_[a] + off;
        }
        return grid_[static_cast<std::size_t>(idx)];
    }
    auto it = sparse_.find(pack(p));
    return it == sparse_.end() ? kNoCell : it->second;
}

Vec3 Region::wrap(Vec3 p) const {
    if (kind_ != RegionKind::torus) return p;
    for (std::size_t a = 0; a < 3; ++a) p[a] = static_cast<std::int32_t>(floor_mod(p[a], extent_[a]));
    return p;
}

std::size_t Region::count(Color c) const {
    return static_cast<std::size_t>(
        std::count_if(coords_.begin(), coords_.end(), [&](const Vec3& p) { return color_at(p) == c; }));
}

std::vector<BoundaryFace> Region::boundary_faces() const {
    std::vector<BoundaryFace> faces;
    for (CellId c = 0; c < static_cast<CellId>(size()); ++c) {
        for (int d = 0; d < dir::count; ++d) {
            if (neighbor(c, d) == kNoCell) faces.push_back({c, d});
        }
    }
    return faces;
}

void Region::index_cells() {
    std::sort(coords_.begin(), coords_.end());
    Vec3 hi = coords_.front();
    lo_ = coords_.front();
    for (const Vec3& p : coords_) {
        for (std::size_t a = 0; a < 3; ++a) {
            lo_[a] = std::min(lo_[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    }
    long long volume = 1;
    for (std::size_t a = 0; a < 3; ++a) {
        span_[a] = hi[a] - lo_[a] + 1;
        volume *= span_[a];
    }
    grid_.clear();
    sparse_.clear();
    const long long dense_limit = std::max<long long>(1 << 22, 8 * static_cast<long long>(coords_.size()));
    if (volume <= dense_limit) {
        grid_.assign(static_cast<std::size_t>(volume), kNoCell);
        for (CellId c = 0; c < static_cast<CellId>(coords_.size()); ++c) {
            const Vec3& p = coords_[static_cast<std::size_t>(c)];
            long long idx = 0;
            for (std::size_t a = 0; a < 3; ++a) idx = idx * span_[a] + (p[a] - lo_[a]);
            CellId& slot = grid_[static_cast<std::size_t>(idx)];
            if (slot != kNoCell) throw RegionError(Violation::duplicate_cell, "duplicate cell " + fmt_point(p));
            slot = c;
        }
    } else {
        sparse_.reserve(coords_.size());
        for (CellId c = 0; c < static_cast<CellId>(coords_.size()); ++c) {
            const Vec3& p = coords_[static_cast<std::size_t>(c)];
            if (!sparse_.emplace(pack(p), c).second) {
                throw RegionError(Violation::duplicate_cell, "duplicate cell " + fmt_point(p));
            }
        }
    }
}

void Region::build_adjacency() {
    adjacency_.assign(coords_.size(), {kNoCell, kNoCell, kNoCell, kNoCell, kNoCell, kNoCell});
    for (CellId c = 0; c < static_cast<CellId>(coords_.size()); ++c) {
        const Vec3& p = coords_[static_cast<std::size_t>(c)];
        for (int d = 0; d < dir::count; ++d) {
            Vec3 q = p;
            q[static_cast<std::size_t>(dir::axis(d))] += dir::sign(d);
            adjacency_[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)] = find(q);
        }
    }
}

RegionPtr build_box(int L, int M, int N) {
    if (L <= 0 || M <= 0 || N <= 0) {
        throw RegionError(Violation::bad_dimensions, "box dimensions must be positive");
    }
    if (L % 2 != 0 && M % 2 != 0 && N % 2 != 0) {
        throw RegionError(Violation::unbalanced, "unbalanced: box " + std::to_string(L) + "x" + std::to_string(M) +
                                                     "x" + std::to_string(N) + " has an odd number of cells");
    }
    check_coordinate(L);
    check_coordinate(M);
    check_coordinate(N);
    auto r = std::shared_ptr<Region>(new Region());
    r->kind_ = RegionKind::box;
    r->extent_ = {L, M, N};
    r->coords_.reserve(static_cast<std::size_t>(L) * M * N);
    for (int x = 0; x < L; ++x)
        for (int y = 0; y < M; ++y)
            for (int z = 0; z < N; ++z) r->coords_.push_back({x, y, z});
    r->index_cells();
    r->build_adjacency();
    return r;
}

RegionPtr build_torus(int a, int b, int c) {
    for (int p : {a, b, c}) {
        if (p < 2) throw RegionError(Violation::bad_dimensions, "torus periods must be >= 2");
        if (p % 2 != 0) {
            throw RegionError(Violation::odd_period, "odd period " + std::to_string(p) +
                                                         ": torus periods must be even for a consistent coloring");
        }
        check_coordinate(p);
    }
    auto r = std::shared_ptr<Region>(new Region());
    r->kind_ = RegionKind::torus;
    r->extent_ = {a, b, c};
    r->degenerate_axis_ = {a == 2, b == 2, c == 2};
    r->coords_.reserve(static_cast<std::size_t>(a) * b * c);
    for (int x = 0; x < a; ++x)
        for (int y = 0; y < b; ++y)
            for (int z = 0; z < c; ++z) r->coords_.push_back({x, y, z});
    r->index_cells();
    r->build_adjacency();
    return r;
}

RegionPtr build_voxel_region(std::vector<Vec3> cells, int parity) {
    if (cells.empty()) throw RegionError(Violation::empty, "empty voxel region");
    if (parity != 0 && parity != 1) throw RegionError(Violation::bad_dimensions, "parity must be 0 or 1");
    for (const Vec3& p : cells)
        for (auto v : p) check_coordinate(v);

    auto r = std::shared_ptr<Region>(new Region());
    r->kind_ = RegionKind::voxels;
    r->parity_ = parity;
    r->coords_ = std::move(cells);
    r->index_cells();
    const Region& R = *r;
    auto occupied = [&](const Vec3& p) { return R.find(p) != kNoCell; };

    // Edges: the edge along axis a at lattice point p is surrounded by the cubes
    // q with q_a = p_a and the other two coordinates in {p-1, p}.
    std::set<std::pair<Vec3, int>> edges;
    std::set<Vec3> vertices;
    for (const Vec3& p : R.cells()) {
        for (int i = 0; i < 8; ++i) {
            vertices.insert({p[0] + (i & 1), p[1] + ((i >> 1) & 1), p[2] + ((i >> 2) & 1)});
        }
        for (int a = 0; a < 3; ++a) {
            const int b = (a + 1) % 3, c = (a + 2) % 3;
            for (int i = 0; i < 4; ++i) {
                Vec3 e = p;
                e[static_cast<std::size_t>(b)] += i & 1;
                e[static_cast<std::size_t>(c)] += (i >> 1) & 1;
                edges.insert({e, a});
            }
        }
    }
    for (const auto& [e, a] : edges) {
        const int b = (a + 1) % 3, c = (a + 2) % 3;
        bool occ[2][2];
        int n = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                Vec3 q = e;
                q[static_cast<std::size_t>(b)] -= 1 - i;
                q[static_cast<std::size_t>(c)] -= 1 - j;
                occ[i][j] = occupied(q);
                n += occ[i][j];
            }
        if (n == 2 && occ[0][0] == occ[1][1]) {
            throw RegionError(Violation::non_manifold_edge,
                              "non-manifold edge at " + fmt_point(e) + " along axis " + std::string(1, "xyz"[a]) +
                                  ": two cubes meet only along this edge");
        }
    }
    const auto& patterns = manifold_vertex_patterns();
    for (const Vec3& v : vertices) {
        unsigned mask = 0;
        for (int i = 0; i < 8; ++i) {
            const Vec3 q{v[0] - (i & 1), v[1] - ((i >> 1) & 1), v[2] - ((i >> 2) & 1)};
            if (occupied(q)) mask |= 1u << i;
        }
        if (!patterns[mask]) {
            throw RegionError(Violation::non_manifold_vertex,
                              "non-manifold vertex at " + fmt_point(v) + ": link is not a disk or sphere");
        }
    }

    r->build_adjacency();

    std::vector<char> seen(R.size(), 0);
    std::queue<CellId> queue;
    queue.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
        CellId c = queue.front();
        queue.pop();
        for (int d = 0; d < dir::count; ++d) {
            CellId n = R.neighbor(c, d);
            if (n != kNoCell && !seen[static_cast<std::size_t>(n)]) {
                seen[static_cast<std::size_t>(n)] = 1;
                ++reached;
                queue.push(n);
            }
        }
    }
    if (reached != R.size()) {
        throw RegionError(Violation::disconnected, "disconnected: " + std::to_string(reached) + " of " +
                                                       std::to_string(R.size()) + " cells reachable from " +
                                                       fmt_point(R.coords(0)));
    }
    const std::size_t black = R.count(Color::black), white = R.count(Color::white);
    if (black != white) {
        throw RegionError(Violation::unbalanced, "unbalanced: " + std::to_string(black) + " black vs " +
                                                     std::to_string(white) + " white cells");
    }
    return r;
}

RegionPtr refine_region(const RegionPtr& region, int k) {
    if (k < 0) throw RegionError(Violation::bad_dimensions, "refinement level must be nonnegative");
    RegionPtr current = region;
    for (int step = 0; step < k; ++step) {
        const Region& src = *current;
        auto r = std::shared_ptr<Region>(new Region());
        r->kind_ = src.kind_;
        r->parity_ = src.parity_;
        for (std::size_t a = 0; a < 3; ++a) {
            check_coordinate(5LL * src.extent_[a]);
            r->extent_[a] = 5 * src.extent_[a];
        }
        r->coords_.reserve(src.size() * 125);
        for (const Vec3& p : src.cells()) {
            for (std::size_t a = 0; a < 3; ++a) {
                check_coordinate(5LL * p[a]);
                check_coordinate(5LL * p[a] + 4);
            }
            for (int i = 0; i < 5; ++i)
                for (int j = 0; j < 5; ++j)
                    for (int l = 0; l < 5; ++l) r->coords_.push_back({5 * p[0] + i, 5 * p[1] + j, 5 * p[2] + l});
        }
        r->index_cells();
        r->build_adjacency();
        current = r;
    }
    return current;
}

bool same_region(const Region& a, const Region& b) {
    if (a.kind() != b.kind() || a.parity() != b.parity() || a.size() != b.size()) return false;
    if (a.kind() != RegionKind::voxels && a.extent() != b.extent()) return false;
    return std::equal(a.cells().begin(), a.cells().end(), b.cells().begin());
}

}  // namespace tritile
