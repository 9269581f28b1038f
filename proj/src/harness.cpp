#include "tritile/harness.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <queue>
#include <unordered_set>

#include "tritile/flux.hpp"
#include "tritile/height.hpp"
#include "tritile/parallel.hpp"

namespace tritile {

namespace {

constexpr std::size_t kMaxListedFailures = 10;

int parse_int_token(const std::string& s, int position) {
    int v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw UsageError(position, "expected an integer, got \"" + s + "\"");
    }
    return v;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Moves from t in a fixed order: flips first, then trits.
struct MoveList {
    std::vector<FlipMove> flips;
    std::vector<TritMove> trits;
    std::size_t size() const { return flips.size() + trits.size(); }
};

MoveList available_moves(const Tiling& t, MoveSet moves) {
    MoveList m;
    m.flips = find_flips(t);
    if (moves == MoveSet::flip_trit) m.trits = find_trits(t);
    return m;
}

// Tally helper: records one check and keeps the first few failure messages.
void record(PropertyResult& p, bool ok, const std::string& detail) {
    ++p.checked;
    if (!ok) {
        ++p.failed;
        if (p.failures.size() < kMaxListedFailures) p.failures.push_back(detail);
    }
}

std::string fmt_vec(const Vec3& v) {
    return "(" + std::to_string(v[0]) + "," + std::to_string(v[1]) + "," + std::to_string(v[2]) + ")";
}

}  // namespace

RegionPtr parse_region_spec(const std::vector<std::string>& tokens, int first) {
    if (tokens.empty()) throw UsageError(first, "missing region (box L M N | torus a b c | file PATH)");
    const std::string& kind = tokens[0];
    if (kind == "box" || kind == "torus") {
        if (tokens.size() < 4) {
            throw UsageError(first + static_cast<int>(tokens.size()), kind + " needs three integer dimensions");
        }
        if (tokens.size() > 4) throw UsageError(first + 4, "unexpected argument \"" + tokens[4] + "\"");
        std::array<int, 3> d{};
        for (int i = 0; i < 3; ++i) d[static_cast<std::size_t>(i)] = parse_int_token(tokens[static_cast<std::size_t>(i + 1)], first + i + 1);
        return kind == "box" ? build_box(d[0], d[1], d[2]) : build_torus(d[0], d[1], d[2]);
    }
    if (kind == "file") {
        if (tokens.size() != 2) throw UsageError(first + 1, "file needs exactly one path");
        return region_from_json(read_json_file(tokens[1]));
    }
    throw UsageError(first, "unknown region kind \"" + kind + "\" (expected box, torus or file)");
}

Tiling mixed_column_tiling(const RegionPtr& torus) {
    const Region& r = *torus;
    if (r.kind() != RegionKind::torus || r.extent()[0] != 4) {
        throw std::invalid_argument("mixed column tiling needs a torus with x period 4");
    }
    std::vector<std::uint8_t> steps(r.size());
    for (CellId c = 0; c < static_cast<CellId>(r.size()); ++c) {
        const Vec3& p = r.coords(c);
        const bool black_base = r.color_at({0, p[1], p[2]}) == Color::black;
        // Offset 0 pairs {0,1},{2,3}; offset 1 pairs {1,2},{3,0}.
        const int shifted = (p[0] - (black_base ? 0 : 1) + 4) % 4;
        steps[static_cast<std::size_t>(c)] = static_cast<std::uint8_t>(dir::make(0, shifted % 2 == 0 ? +1 : -1));
    }
    return Tiling(torus, std::move(steps));
}

Tiling default_base_tiling(const RegionPtr& region) {
    if (region->kind() != RegionKind::voxels) {
        for (int a = 0; a < 3; ++a) {
            if (region->extent()[static_cast<std::size_t>(a)] % 2 == 0) return base_tiling(region, a);
        }
    }
    const std::vector<Tiling> first = TilingEnumerator(region).collect(1);
    if (first.empty()) throw std::invalid_argument("region has no tiling");
    return first.front();
}

WalkResult random_walk(const WalkConfig& cfg, const Tiling& start) {
    std::mt19937_64 rng(cfg.seed);
    const bool is_box = start.region().kind() == RegionKind::box;
    WalkResult out;
    std::unordered_set<std::uint64_t> seen{start.hash()};
    Tiling cur = start;
    std::int64_t label = is_box ? twist(start) : 0;
    if (is_box) ++out.twist_histogram[label];
    for (std::uint64_t step = 0; step < cfg.steps; ++step) {
        const MoveList moves = available_moves(cur, cfg.moves);
        if (moves.size() == 0) {
            out.frozen = true;
            break;
        }
        const std::size_t pick = static_cast<std::size_t>(rng() % moves.size());
        if (pick < moves.flips.size()) {
            cur = apply_flip(cur, moves.flips[pick]);
        } else {
            const TritMove& m = moves.trits[pick - moves.flips.size()];
            cur = apply_trit(cur, m);
            label += m.sign;
        }
        ++out.steps_taken;
        seen.insert(cur.hash());
        if (is_box) ++out.twist_histogram[label];
    }
    out.distinct_visited = seen.size();
    out.final_label = label;
    out.final_hash = cur.hash();
    if (cur.region().kind() == RegionKind::torus) out.flux = flux(cur);
    return out;
}

Tiling walk_to(const Tiling& start, MoveSet moves, std::uint64_t steps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Tiling cur = start;
    for (std::uint64_t step = 0; step < steps; ++step) {
        const MoveList m = available_moves(cur, moves);
        if (m.size() == 0) break;
        const std::size_t pick = static_cast<std::size_t>(rng() % m.size());
        cur = pick < m.flips.size() ? apply_flip(cur, m.flips[pick]) : apply_trit(cur, m.trits[pick - m.flips.size()]);
    }
    return cur;
}

bool SuiteResult::passed() const {
    return !properties.empty() &&
           std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.passed(); });
}

Json SuiteResult::to_json() const {
    Json props = Json::array();
    for (const PropertyResult& p : properties) {
        props.push_back({{"property", p.property},
                         {"checked", p.checked},
                         {"failed", p.failed},
                         {"passed", p.passed()},
                         {"failures", p.failures}});
    }
    return {{"suite", suite}, {"passed", passed()}, {"properties", props}};
}

// ---------------------------------------------------------------------------

SuiteResult verify_euler(std::uint64_t seed, int tilings, int surfaces_per_tiling) {
    const RegionPtr r = build_box(4, 4, 4);
    const Tiling base = base_tiling(r, 0);
    const auto n = static_cast<std::size_t>(tilings);
    const auto per = static_cast<std::size_t>(surfaces_per_tiling);

    struct Outcome {
        std::string label;
        std::int64_t phi;
        bool identity;
    };
    std::vector<Outcome> outcomes(n * per);
    parallel_for(n, [&](std::size_t i) {
        const Tiling t = walk_to(base, MoveSet::flip_trit, 200, mix_seed(seed, i));
        std::mt19937_64 rng(mix_seed(seed ^ 0xE1E1E1E1ULL, i));
        for (std::size_t k = 0; k < per; ++k) {
            Vec3 corner{}, dims{};
            for (std::size_t a = 0; a < 3; ++a) {
                dims[a] = 1 + static_cast<int>(rng() % 3);
                corner[a] = static_cast<int>(rng() % static_cast<std::uint64_t>(4 - dims[a]));
            }
            const DiscreteSurface s = closed_box_surface(r, corner, dims);
            long b_int = 0, w_int = 0, b_bd = 0, w_bd = 0;
            for (int x = 0; x <= dims[0]; ++x)
                for (int y = 0; y <= dims[1]; ++y)
                    for (int z = 0; z <= dims[2]; ++z) {
                        const Vec3 p{corner[0] + x, corner[1] + y, corner[2] + z};
                        const CellId c = r->find(p);
                        const bool black = r->color(c) == Color::black;
                        if (s.vertices().count(c)) {
                            (black ? b_bd : w_bd) += 1;
                        } else {
                            (black ? b_int : w_int) += 1;
                        }
                    }
            outcomes[i * per + k] = {"tiling " + std::to_string(i) + " box " + fmt_vec(corner) + "+" + fmt_vec(dims),
                                     flux_through_surface(t, s), 2 * b_int + b_bd == 2 * w_int + w_bd};
        }
    });
    PropertyResult phi{"phi_zero_on_closed_box_surfaces"};
    PropertyResult count{"vertex_count_identity"};
    for (const Outcome& o : outcomes) {
        record(phi, o.phi == 0, o.label + ": phi = " + std::to_string(o.phi));
        record(count, o.identity, o.label + ": 2b_int + b_bd != 2w_int + w_bd");
    }
    return {"euler", {phi, count}};
}

SuiteResult verify_twist() {
    SuiteResult out{"twist", {}};
    PropertyResult axes{"twist_axis_independent_and_integral"};
    PropertyResult flips{"flip_changes_twist_by_0"};
    PropertyResult trits{"trit_changes_twist_by_sign"};
    PropertyResult oracle{"bfs_trit_label_equals_twist"};
    PropertyResult components{"flip_components_227_1_1_with_frozen_singletons"};
    PropertyResult connected{"single_flip_trit_component"};

    for (const auto& dims : {Vec3{3, 3, 2}, Vec3{2, 2, 2}}) {
        const RegionPtr r = build_box(dims[0], dims[1], dims[2]);
        for (const Tiling& t : enumerate_tilings(r)) {
            const std::int64_t qx = twist_quarters(t, 0), qy = twist_quarters(t, 1), qz = twist_quarters(t, 2);
            record(axes, qx == qy && qy == qz && qz % 4 == 0,
                   fmt_vec(dims) + " tiling " + std::to_string(t.hash()) + ": quarters " + std::to_string(qx) + "," +
                       std::to_string(qy) + "," + std::to_string(qz));
        }
    }

    const RegionPtr r = build_box(3, 3, 2);
    const MoveGraph g(enumerate_tilings(r), MoveSet::flip_trit);
    std::vector<std::int64_t> tw(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) tw[i] = twist(g.tiling(i));
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (const MoveGraph::Edge& e : g.edges(i)) {
            const std::int64_t delta = tw[e.to] - tw[i];
            const std::string where = "edge " + std::to_string(i) + " -> " + std::to_string(e.to) + ": delta " +
                                      std::to_string(delta) + ", sign " + std::to_string(e.trit_sign);
            if (e.trit_sign == 0) {
                record(flips, delta == 0, where);
            } else {
                record(trits, delta == e.trit_sign, where);
            }
        }
    }
    const Tiling base = base_tiling(r, 2);
    const long b = g.index_of(base);
    const TritLabeling lab = bfs_trit_labeling(g, static_cast<std::size_t>(b));
    record(oracle, lab.consistent, "labeling is not cycle-consistent (gcd " + std::to_string(lab.discrepancy_gcd) + ")");
    for (std::size_t i = 0; i < g.size(); ++i) {
        record(oracle, lab.reached[i] && lab.label[i] == tw[i] - tw[static_cast<std::size_t>(b)],
               "tiling " + std::to_string(i) + ": label " + std::to_string(lab.label[i]) + ", twist " + std::to_string(tw[i]));
    }

    const MoveGraph fg(g.tilings(), MoveSet::flip);
    const std::vector<std::size_t> sizes = fg.component_sizes();
    record(components, sizes == std::vector<std::size_t>{227, 1, 1}, "flip component sizes differ from 227, 1, 1");
    std::vector<std::size_t> frozen;
    for (std::size_t i = 0; i < fg.size(); ++i) {
        if (fg.edges(i).empty()) frozen.push_back(i);
    }
    record(components, frozen.size() == 2 && tw[frozen[0]] == -tw[frozen[1]] && tw[frozen[0]] != 0,
           "the two flip-frozen tilings are not a mirror pair with opposite nonzero twist");
    record(connected, g.component_count() == 1, "flip+trit graph has " + std::to_string(g.component_count()) + " components");

    out.properties = {axes, flips, trits, oracle, components, connected};
    return out;
}

SuiteResult verify_refine(std::uint64_t seed, int torus_samples) {
    PropertyResult twist_prop{"twist_preserved_by_refinement"};
    PropertyResult cover{"refined_tiling_is_valid"};
    PropertyResult flux_prop{"flux_preserved_by_refinement"};

    const RegionPtr r = build_box(3, 3, 2);
    const RegionPtr fine = refine_region(r, 1);
    const std::vector<Tiling> all = enumerate_tilings(r);
    struct Outcome {
        std::int64_t before, after;
        bool valid;
    };
    std::vector<Outcome> outcomes(all.size());
    parallel_for(all.size(), [&](std::size_t i) {
        const Tiling refined = refine_tiling(all[i], 1, fine);
        outcomes[i] = {twist(all[i]), twist(refined), refined.dimer_count() == 125 * all[i].dimer_count()};
    });
    for (std::size_t i = 0; i < all.size(); ++i) {
        record(twist_prop, outcomes[i].before == outcomes[i].after,
               "tiling " + std::to_string(i) + ": twist " + std::to_string(outcomes[i].before) + " -> " +
                   std::to_string(outcomes[i].after));
        record(cover, outcomes[i].valid, "tiling " + std::to_string(i) + ": wrong dimer count after refinement");
    }

    // Torus samples: half start from the base tiling, half from the mixed tiling.
    const RegionPtr torus = build_torus(4, 4, 4);
    const RegionPtr fine_torus = refine_region(torus, 1);
    const auto n = static_cast<std::size_t>(torus_samples);
    std::vector<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>> fluxes(n);
    parallel_for(n, [&](std::size_t i) {
        const Tiling start = i % 2 == 0 ? base_tiling(torus, 0) : mixed_column_tiling(torus);
        const Tiling t = walk_to(start, MoveSet::flip_trit, 100, mix_seed(seed, i));
        fluxes[i] = {flux(t), flux(refine_tiling(t, 1, fine_torus))};
    });
    for (std::size_t i = 0; i < n; ++i) {
        auto show = [](const std::vector<std::int64_t>& f) {
            std::string s = "(";
            for (std::size_t k = 0; k < f.size(); ++k) s += (k ? "," : "") + std::to_string(f[k]);
            return s + ")";
        };
        record(flux_prop, fluxes[i].first == fluxes[i].second,
               "sample " + std::to_string(i) + ": flux " + show(fluxes[i].first) + " -> " + show(fluxes[i].second));
    }
    return {"refine", {twist_prop, cover, flux_prop}};
}

SuiteResult verify_heightfn() {
    PropertyResult replay{"flip_connect_replays_to_target"};
    PropertyResult wind_len{"path_length_equals_total_winding"};
    PropertyResult bfs_len{"path_length_equals_graph_distance"};
    PropertyResult conditions{"height_conditions_a_b_c"};
    PropertyResult reconstruct{"tiling_recovered_from_height"};
    PropertyResult extremum{"flip_available_iff_local_extremum"};

    std::vector<Cell2> cells;
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) cells.push_back({x, y});
    const CoquadSurface s = build_planar_surface(cells);
    const std::vector<TilingClass> classes = tiling_classes(s);
    const TilingClass& cls = classes.front();
    const std::vector<SurfaceTiling>& ts = cls.members;
    const std::size_t n = ts.size();

    std::vector<HeightField> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = height_function(s, ts[i], cls);
    for (std::size_t i = 0; i < n; ++i) {
        record(conditions, check_height_conditions(s, h[i], h[0]).all(), "tiling " + std::to_string(i));
        const auto back = tiling_from_height(s, h[i], ts[0], h[0]);
        record(reconstruct, back && *back == ts[i], "tiling " + std::to_string(i));
        for (int f = 1; f < static_cast<int>(s.face_count()); ++f) {
            bool above = true, below = true;
            for (int e : s.face_edges(f)) {
                const CoquadEdge& ed = s.edge(e);
                const int other = ed.left == f ? ed.right : ed.left;
                const std::int64_t here = h[i].numer[static_cast<std::size_t>(f)];
                const std::int64_t there = h[i].numer[static_cast<std::size_t>(other)];
                above = above && here > there;
                below = below && here < there;
            }
            record(extremum, can_flip(s, ts[i], f) == (above || below),
                   "tiling " + std::to_string(i) + " face " + std::to_string(f));
        }
    }

    // Graph distances by BFS over the flip graph.
    std::map<SurfaceTiling, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[ts[i]] = i;
    std::vector<std::vector<std::size_t>> dist(n, std::vector<std::size_t>(n, SIZE_MAX));
    for (std::size_t src = 0; src < n; ++src) {
        std::queue<std::size_t> q;
        q.push(src);
        dist[src][src] = 0;
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (int f = 1; f < static_cast<int>(s.face_count()); ++f) {
                if (!can_flip(s, ts[u], f)) continue;
                const std::size_t v = index.at(flip_face(s, ts[u], f));
                if (dist[src][v] == SIZE_MAX) {
                    dist[src][v] = dist[src][u] + 1;
                    q.push(v);
                }
            }
        }
    }

    struct Outcome {
        bool replay_ok;
        std::size_t length, wind, bfs;
    };
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<Outcome> outcomes(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t k) {
        const auto [i, j] = pairs[k];
        const std::vector<int> path = flip_connect(s, ts[i], ts[j], cls);
        SurfaceTiling cur = ts[i];
        bool ok = true;
        for (int f : path) {
            if (!can_flip(s, cur, f)) {
                ok = false;
                break;
            }
            cur = flip_face(s, cur, f);
        }
        const HeightField w = *winding(s, ts[j], ts[i]);
        std::size_t total = 0;
        for (std::int64_t v : w.numer) total += static_cast<std::size_t>(std::abs(v));
        outcomes[k] = {ok && cur == ts[j], path.size(), total, dist[i][j]};
    });
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const std::string where = "pair " + std::to_string(pairs[k].first) + "," + std::to_string(pairs[k].second);
        const Outcome& o = outcomes[k];
        record(replay, o.replay_ok, where);
        record(wind_len, o.length == o.wind, where + ": length " + std::to_string(o.length) + ", winding " + std::to_string(o.wind));
        record(bfs_len, o.length == o.bfs, where + ": length " + std::to_string(o.length) + ", distance " + std::to_string(o.bfs));
    }
    return {"heightfn", {replay, wind_len, bfs_len, conditions, reconstruct, extremum}};
}

// ---------------------------------------------------------------------------

std::vector<ComponentSummary> summarize_components(const MoveGraph& g) {
    const bool is_box = g.size() > 0 && g.tiling(0).region().kind() == RegionKind::box;
    std::vector<ComponentSummary> comps(g.component_count());
    std::vector<std::size_t> first(g.component_count(), SIZE_MAX);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::uint32_t c = g.component_of()[i];
        ComponentSummary& s = comps[c];
        first[c] = std::min(first[c], i);
        ++s.size;
        if (is_box) {
            const std::int64_t tw = twist(g.tiling(i));
            s.min_twist = s.min_twist ? std::min(*s.min_twist, tw) : tw;
            s.max_twist = s.max_twist ? std::max(*s.max_twist, tw) : tw;
        }
    }
    std::vector<std::size_t> order(comps.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (comps[a].size != comps[b].size) return comps[a].size > comps[b].size;
        return first[a] < first[b];
    });
    std::vector<ComponentSummary> out;
    for (std::size_t k : order) out.push_back(comps[k]);
    return out;
}

Json components_report(const RegionPtr& region, MoveSet moves) {
    const MoveGraph g(enumerate_tilings(region), moves);
    Json comps = Json::array();
    for (const ComponentSummary& c : summarize_components(g)) {
        Json j;
        j["size"] = c.size;
        j["min_twist"] = c.min_twist ? Json(*c.min_twist) : Json(nullptr);
        j["max_twist"] = c.max_twist ? Json(*c.max_twist) : Json(nullptr);
        comps.push_back(std::move(j));
    }
    Json out;
    out["region"] = region_to_json(*region);
    out["moves"] = to_string(moves);
    out["num_tilings"] = g.size();
    out["components"] = std::move(comps);
    return out;
}

}  // namespace tritile
