#include "tritile/height.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace tritile {

CoquadSurface::CoquadSurface(std::vector<Color> vertex_colors, std::vector<CoquadEdge> edges, int face_count)
    : colors_(std::move(vertex_colors)), edges_(std::move(edges)) {
    if (face_count < 1) throw CoquadError("face list must contain infinity");
    const int nv = static_cast<int>(colors_.size());
    incident_.assign(colors_.size(), {});
    face_edges_.assign(static_cast<std::size_t>(face_count), {});
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
        const CoquadEdge& ed = edges_[static_cast<std::size_t>(e)];
        if (ed.black < 0 || ed.black >= nv || ed.white < 0 || ed.white >= nv) {
            throw CoquadError("edge " + std::to_string(e) + " references a missing vertex");
        }
        if (color(ed.black) != Color::black || color(ed.white) != Color::white) {
            throw CoquadError("edge " + std::to_string(e) + " is not oriented black -> white");
        }
        if (ed.left < 0 || ed.left >= face_count || ed.right < 0 || ed.right >= face_count) {
            throw CoquadError("edge " + std::to_string(e) + " references a missing face");
        }
        if (ed.left == ed.right && ed.left != kInfinity) {
            throw CoquadError("edge " + std::to_string(e) + " has the same square on both sides");
        }
        incident_[static_cast<std::size_t>(ed.black)].push_back(e);
        incident_[static_cast<std::size_t>(ed.white)].push_back(e);
        if (ed.left != kInfinity) face_edges_[static_cast<std::size_t>(ed.left)].push_back(e);
        if (ed.right != kInfinity) face_edges_[static_cast<std::size_t>(ed.right)].push_back(e);
    }
    for (int f = 1; f < face_count; ++f) {
        const auto& fe = face_edges_[static_cast<std::size_t>(f)];
        if (fe.size() != 4) throw CoquadError("face " + std::to_string(f) + " is not bounded by four edges");
        std::map<int, int> degree;
        int on_left = 0;
        for (int e : fe) {
            ++degree[edge(e).black];
            ++degree[edge(e).white];
            on_left += edge(e).left == f;
        }
        const bool cycle = degree.size() == 4 &&
                           std::all_of(degree.begin(), degree.end(), [](const auto& kv) { return kv.second == 2; });
        if (!cycle) throw CoquadError("face " + std::to_string(f) + " is not bounded by a 4-cycle");
        if (on_left != 2) throw CoquadError("face " + std::to_string(f) + " has inconsistent left/right sides");
    }
}

PlanarSurface build_planar(std::vector<Cell2> cells) {
    if (cells.empty()) throw CoquadError("empty planar region");
    std::sort(cells.begin(), cells.end());
    if (std::adjacent_find(cells.begin(), cells.end()) != cells.end()) throw CoquadError("duplicate cell");
    std::map<Cell2, int> id;
    for (int i = 0; i < static_cast<int>(cells.size()); ++i) id[cells[static_cast<std::size_t>(i)]] = i;
    auto is_black = [](const Cell2& c) { return ((c[0] + c[1]) % 2 + 2) % 2 == 0; };

    std::vector<Color> colors;
    long balance = 0;
    for (const Cell2& c : cells) {
        colors.push_back(is_black(c) ? Color::black : Color::white);
        balance += is_black(c) ? 1 : -1;
    }
    // Connectivity.
    std::vector<char> seen(cells.size(), 0);
    std::queue<int> queue;
    queue.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    static constexpr int dx[4] = {1, -1, 0, 0};
    static constexpr int dy[4] = {0, 0, 1, -1};
    while (!queue.empty()) {
        const Cell2 c = cells[static_cast<std::size_t>(queue.front())];
        queue.pop();
        for (int k = 0; k < 4; ++k) {
            auto it = id.find({c[0] + dx[k], c[1] + dy[k]});
            if (it != id.end() && !seen[static_cast<std::size_t>(it->second)]) {
                seen[static_cast<std::size_t>(it->second)] = 1;
                ++reached;
                queue.push(it->second);
            }
        }
    }
    if (reached != cells.size()) throw CoquadError("disconnected planar region");
    if (balance != 0) throw CoquadError("unbalanced planar region");

    // Faces: 2x2 blocks, keyed by their lower-left cell.
    std::map<Cell2, int> face_id;
    std::vector<Cell2> face_corner{{0, 0}};
    for (const Cell2& c : cells) {
        if (id.count({c[0] + 1, c[1]}) && id.count({c[0], c[1] + 1}) && id.count({c[0] + 1, c[1] + 1})) {
            face_id[c] = static_cast<int>(face_corner.size());
            face_corner.push_back(c);
        }
    }
    auto face_at = [&](const Cell2& corner) {
        auto it = face_id.find(corner);
        return it == face_id.end() ? CoquadSurface::kInfinity : it->second;
    };
    std::vector<CoquadEdge> edges;
    for (const Cell2& c : cells) {
        for (int k : {0, 2}) {
            const Cell2 n{c[0] + dx[k], c[1] + dy[k]};
            if (!id.count(n)) continue;
            const Cell2 b = is_black(c) ? c : n;
            const Cell2 w = is_black(c) ? n : c;
            const int ex = w[0] - b[0], ey = w[1] - b[1];
            // Left of the direction (ex, ey) is (-ey, ex).
            const Cell2 base{std::min(b[0], w[0]), std::min(b[1], w[1])};
            auto side = [&](int sx, int sy) { return face_at({base[0] + std::min(sx, 0), base[1] + std::min(sy, 0)}); };
            edges.push_back({id[b], id[w], side(-ey, ex), side(ey, -ex)});
        }
    }
    const int faces = static_cast<int>(face_corner.size());
    return PlanarSurface{CoquadSurface(std::move(colors), std::move(edges), faces), std::move(cells),
                         std::move(face_corner)};
}

CoquadSurface build_planar_surface(std::vector<Cell2> cells) { return build_planar(std::move(cells)).surface; }

bool is_perfect_matching(const CoquadSurface& s, const SurfaceTiling& t) {
    if (t.in_tiling.size() != s.edge_count()) return false;
    for (int v = 0; v < static_cast<int>(s.vertex_count()); ++v) {
        int used = 0;
        for (int e : s.incident(v)) used += t.contains(e);
        if (used != 1) return false;
    }
    return true;
}

std::vector<SurfaceTiling> enumerate_surface_tilings(const CoquadSurface& s) {
    std::vector<SurfaceTiling> out;
    SurfaceTiling cur{std::vector<std::uint8_t>(s.edge_count(), 0)};
    std::vector<char> covered(s.vertex_count(), 0);
    auto rec = [&](auto&& self, std::size_t from) -> void {
        while (from < covered.size() && covered[from]) ++from;
        if (from == covered.size()) {
            out.push_back(cur);
            return;
        }
        for (int e : s.incident(static_cast<int>(from))) {
            const CoquadEdge& ed = s.edge(e);
            const int other = ed.black == static_cast<int>(from) ? ed.white : ed.black;
            if (covered[static_cast<std::size_t>(other)]) continue;
            covered[from] = covered[static_cast<std::size_t>(other)] = 1;
            cur.in_tiling[static_cast<std::size_t>(e)] = 1;
            self(self, from + 1);
            cur.in_tiling[static_cast<std::size_t>(e)] = 0;
            covered[from] = covered[static_cast<std::size_t>(other)] = 0;
        }
    };
    rec(rec, 0);
    return out;
}

bool HeightField::integral() const {
    return std::all_of(numer.begin(), numer.end(), [&](std::int64_t n) { return n % denom == 0; });
}

std::optional<HeightField> winding(const CoquadSurface& s, const SurfaceTiling& t1, const SurfaceTiling& t0) {
    const std::size_t nf = s.face_count();
    // Face adjacency through edges: w(left) = w(right) + g(e).
    std::vector<std::vector<std::pair<int, int>>> adj(nf);  // (neighbor face, w(neighbor) - w(self))
    for (int e = 0; e < static_cast<int>(s.edge_count()); ++e) {
        const CoquadEdge& ed = s.edge(e);
        const int g = static_cast<int>(t1.contains(e)) - static_cast<int>(t0.contains(e));
        if (ed.left == ed.right) {
            if (g != 0) return std::nullopt;
            continue;
        }
        adj[static_cast<std::size_t>(ed.right)].push_back({ed.left, +g});
        adj[static_cast<std::size_t>(ed.left)].push_back({ed.right, -g});
    }
    HeightField w{std::vector<std::int64_t>(nf, 0), 1};
    std::vector<char> seen(nf, 0);
    std::queue<int> queue;
    queue.push(CoquadSurface::kInfinity);
    seen[0] = 1;
    while (!queue.empty()) {
        const int f = queue.front();
        queue.pop();
        for (const auto& [n, delta] : adj[static_cast<std::size_t>(f)]) {
            const std::int64_t expected = w.numer[static_cast<std::size_t>(f)] + delta;
            if (!seen[static_cast<std::size_t>(n)]) {
                seen[static_cast<std::size_t>(n)] = 1;
                w.numer[static_cast<std::size_t>(n)] = expected;
                queue.push(n);
            } else if (w.numer[static_cast<std::size_t>(n)] != expected) {
                return std::nullopt;
            }
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        throw CoquadError("face graph is disconnected from infinity");
    }
    return w;
}

std::vector<TilingClass> tiling_classes(const CoquadSurface& s) {
    std::vector<TilingClass> classes;
    for (SurfaceTiling& t : enumerate_surface_tilings(s)) {
        auto it = std::find_if(classes.begin(), classes.end(),
                               [&](const TilingClass& c) { return winding(s, t, c.members.front()).has_value(); });
        if (it == classes.end()) {
            classes.push_back({{std::move(t)}, false});
        } else {
            it->members.push_back(std::move(t));
        }
    }
    for (TilingClass& c : classes) c.stable = is_stable(s, c);
    return classes;
}

bool is_stable(const CoquadSurface& s, const TilingClass& cls) {
    for (int e = 0; e < static_cast<int>(s.edge_count()); ++e) {
        const bool used = std::any_of(cls.members.begin(), cls.members.end(), [&](const SurfaceTiling& t) { return t.contains(e); });
        if (!used) return false;
    }
    return true;
}

HeightField height_function(const CoquadSurface& s, const SurfaceTiling& t, const TilingClass& cls) {
    HeightField h{std::vector<std::int64_t>(s.face_count(), 0), static_cast<std::int64_t>(cls.members.size())};
    for (const SurfaceTiling& u : cls.members) {
        auto w = winding(s, t, u);
        if (!w) throw CoquadError("height_function: tiling is not in the class");
        for (std::size_t f = 0; f < h.numer.size(); ++f) h.numer[f] += w->numer[f];
    }
    return h;
}

HeightConditions check_height_conditions(const CoquadSurface& s, const HeightField& h, const HeightField& reference) {
    HeightConditions c;
    c.zero_at_infinity = h.numer[CoquadSurface::kInfinity] == 0;
    // Compare h and reference over the common denominator.
    c.integral_offset = true;
    for (std::size_t f = 0; f < h.numer.size(); ++f) {
        const std::int64_t diff = h.numer[f] * reference.denom - reference.numer[f] * h.denom;
        if (diff % (h.denom * reference.denom) != 0) c.integral_offset = false;
    }
    c.strict_neighbors = true;
    for (const CoquadEdge& e : s.edges()) {
        const std::int64_t d = h.numer[static_cast<std::size_t>(e.left)] - h.numer[static_cast<std::size_t>(e.right)];
        if (d >= h.denom || d <= -h.denom) c.strict_neighbors = false;
    }
    return c;
}

std::optional<SurfaceTiling> tiling_from_height(const CoquadSurface& s, const HeightField& h,
                                                const SurfaceTiling& ref_tiling, const HeightField& ref_height) {
    SurfaceTiling t{std::vector<std::uint8_t>(s.edge_count(), 0)};
    for (int e = 0; e < static_cast<int>(s.edge_count()); ++e) {
        const CoquadEdge& ed = s.edge(e);
        const auto l = static_cast<std::size_t>(ed.left), r = static_cast<std::size_t>(ed.right);
        // [e in t] = (h(l) - h(r)) - (ref(l) - ref(r)) + [e in ref], over denominator h.denom * ref.denom.
        const std::int64_t den = h.denom * ref_height.denom;
        const std::int64_t num = (h.numer[l] - h.numer[r]) * ref_height.denom -
                                 (ref_height.numer[l] - ref_height.numer[r]) * h.denom +
                                 (ref_tiling.contains(e) ? den : 0);
        if (num == 0) continue;
        if (num != den) return std::nullopt;
        t.in_tiling[static_cast<std::size_t>(e)] = 1;
    }
    if (!is_perfect_matching(s, t)) return std::nullopt;
    return t;
}

namespace {

HeightField combine(const HeightField& a, const HeightField& b, bool take_min) {
    HeightField out{std::vector<std::int64_t>(a.numer.size()), a.denom * b.denom};
    for (std::size_t f = 0; f < a.numer.size(); ++f) {
        const std::int64_t x = a.numer[f] * b.denom, y = b.numer[f] * a.denom;
        out.numer[f] = take_min ? std::min(x, y) : std::max(x, y);
    }
    // Reduce to a common smallest denominator.
    std::int64_t g = out.denom;
    for (std::int64_t n : out.numer) g = std::gcd(g, n);
    if (g > 1) {
        out.denom /= g;
        for (std::int64_t& n : out.numer) n /= g;
    }
    return out;
}

}  // namespace

HeightField pointwise_min(const HeightField& a, const HeightField& b) { return combine(a, b, true); }
HeightField pointwise_max(const HeightField& a, const HeightField& b) { return combine(a, b, false); }

bool can_flip(const CoquadSurface& s, const SurfaceTiling& t, int f) {
    if (f == CoquadSurface::kInfinity) return false;
    const auto& fe = s.face_edges(f);
    std::vector<int> in;
    for (int e : fe) {
        if (t.contains(e)) in.push_back(e);
    }
    if (in.size() != 2) return false;
    const CoquadEdge& a = s.edge(in[0]);
    const CoquadEdge& b = s.edge(in[1]);
    return a.black != b.black && a.white != b.white;
}

SurfaceTiling flip_face(const CoquadSurface& s, const SurfaceTiling& t, int f) {
    if (!can_flip(s, t, f)) throw CoquadError("no flip available at face " + std::to_string(f));
    SurfaceTiling out = t;
    for (int e : s.face_edges(f)) out.in_tiling[static_cast<std::size_t>(e)] ^= 1;
    return out;
}

namespace {

// Flips taking `from` (height h) down to the tiling with height `target` <= h.
std::vector<int> descend(const CoquadSurface& s, SurfaceTiling cur, HeightField h, const HeightField& target) {
    std::vector<int> faces;
    const std::size_t nf = s.face_count();
    for (;;) {
        std::int64_t best_gap = 0, best_h = 0;
        int best = -1;
        for (std::size_t f = 1; f < nf; ++f) {
            const std::int64_t gap = h.numer[f] - target.numer[f];
            if (gap < 0) throw std::logic_error("flip_connect: target is not below the current height");
            if (gap == 0) continue;
            if (best < 0 || gap > best_gap || (gap == best_gap && h.numer[f] > best_h)) {
                best = static_cast<int>(f);
                best_gap = gap;
                best_h = h.numer[f];
            }
        }
        if (best < 0) return faces;
        cur = flip_face(s, cur, best);
        h.numer[static_cast<std::size_t>(best)] -= h.denom;
        faces.push_back(best);
    }
}

}  // namespace

std::vector<int> flip_connect(const CoquadSurface& s, const SurfaceTiling& t0, const SurfaceTiling& t1,
                              const TilingClass& cls) {
    if (!winding(s, t1, t0)) throw CoquadError("flip_connect: tilings have different flux");
    if (!is_stable(s, cls)) throw CoquadError("flip_connect: tiling class is not stable");
    const HeightField h0 = height_function(s, t0, cls);
    const HeightField h1 = height_function(s, t1, cls);
    HeightField meet = h0;
    for (std::size_t f = 0; f < meet.numer.size(); ++f) meet.numer[f] = std::min(h0.numer[f], h1.numer[f]);
    std::vector<int> down0 = descend(s, t0, h0, meet);
    std::vector<int> down1 = descend(s, t1, h1, meet);
    // A flip at a face is its own inverse, so the path back up replays down1 reversed.
    down0.insert(down0.end(), down1.rbegin(), down1.rend());
    return down0;
}

}  // namespace tritile
