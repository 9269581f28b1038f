#include "tritile/tiling.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

namespace tritile {

namespace {

constexpr std::uint8_t kFree = 0xFF;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::string describe(const Region& r, CellId c) {
    const Vec3& p = r.coords(c);
    std::ostringstream os;
    os << '(' << p[0] << ',' << p[1] << ',' << p[2] << ')';
    return os.str();
}

}  // namespace

std::uint64_t dimer_code(const Dimer& d) {
    return static_cast<std::uint64_t>(d.white) * dir::count + static_cast<std::uint64_t>(d.direction);
}

std::uint64_t tiling_hash(std::span<const std::uint8_t> steps, const Region& region) {
    // Fold over dimer codes in increasing white-cell order.
    std::uint64_t h = 0x243F6A8885A308D3ull ^ steps.size();
    for (CellId c = 0; c < static_cast<CellId>(steps.size()); ++c) {
        if (region.color(c) != Color::white) continue;
        const std::uint64_t code = static_cast<std::uint64_t>(c) * dir::count + steps[static_cast<std::size_t>(c)];
        h = splitmix64(h ^ splitmix64(code));
    }
    return h;
}

Tiling::Tiling(Unchecked, RegionPtr region, std::vector<std::uint8_t> steps)
    : region_(std::move(region)), steps_(std::move(steps)) {
    hash_ = tiling_hash(steps_, *region_);
}

Tiling::Tiling(RegionPtr region, std::vector<std::uint8_t> steps) : region_(std::move(region)), steps_(std::move(steps)) {
    const Region& r = *region_;
    if (steps_.size() != r.size()) {
        throw TilingError(kNoCell, "step array has " + std::to_string(steps_.size()) + " entries for " +
                                       std::to_string(r.size()) + " cells");
    }
    for (CellId c = 0; c < static_cast<CellId>(r.size()); ++c) {
        const int d = steps_[static_cast<std::size_t>(c)];
        if (d >= dir::count) throw TilingError(c, "cell uncovered " + describe(r, c));
        const CellId m = r.neighbor(c, d);
        if (m == kNoCell) throw TilingError(c, "cell " + describe(r, c) + " steps outside the region");
        if (!r.is_representative_step(c, d)) {
            throw TilingError(c, "cell " + describe(r, c) + " uses a non-representative step");
        }
        if (steps_[static_cast<std::size_t>(m)] != dir::opposite(d)) {
            throw TilingError(c, "cell " + describe(r, c) + " and its partner disagree");
        }
    }
    hash_ = tiling_hash(steps_, r);
}

Tiling Tiling::from_dimers(RegionPtr region, std::span<const Dimer> dimers) {
    const Region& r = *region;
    std::vector<std::uint8_t> steps(r.size(), kFree);
    for (const Dimer& d : dimers) {
        if (d.white < 0 || d.black < 0 || d.white >= static_cast<CellId>(r.size()) ||
            d.black >= static_cast<CellId>(r.size())) {
            throw TilingError(kNoCell, "dimer references a cell outside the region");
        }
        if (r.color(d.white) != Color::white || r.color(d.black) != Color::black) {
            throw TilingError(d.white, "dimer at " + describe(r, d.white) + " is not oriented white -> black");
        }
        if (d.direction < 0 || d.direction >= dir::count || r.neighbor(d.white, d.direction) != d.black ||
            !r.is_representative_step(d.white, d.direction)) {
            throw TilingError(d.white, "cells " + describe(r, d.white) + " and " + describe(r, d.black) +
                                           " are not adjacent");
        }
        for (CellId c : {d.white, d.black}) {
            if (steps[static_cast<std::size_t>(c)] != kFree) {
                throw TilingError(c, "cell covered twice " + describe(r, c));
            }
        }
        steps[static_cast<std::size_t>(d.white)] = static_cast<std::uint8_t>(d.direction);
        steps[static_cast<std::size_t>(d.black)] = static_cast<std::uint8_t>(dir::opposite(d.direction));
    }
    for (CellId c = 0; c < static_cast<CellId>(r.size()); ++c) {
        if (steps[static_cast<std::size_t>(c)] == kFree) throw TilingError(c, "cell uncovered " + describe(r, c));
    }
    return Tiling(Unchecked{}, std::move(region), std::move(steps));
}

Dimer Tiling::dimer_at(CellId c) const {
    const CellId m = mate(c);
    if (region_->color(c) == Color::white) return {c, m, step(c)};
    return {m, c, dir::opposite(step(c))};
}

std::vector<Dimer> Tiling::dimers() const {
    std::vector<Dimer> out;
    out.reserve(dimer_count());
    for (CellId c = 0; c < static_cast<CellId>(steps_.size()); ++c) {
        if (region_->color(c) == Color::white) out.push_back({c, mate(c), step(c)});
    }
    return out;
}

bool Tiling::contains(const Dimer& d) const {
    if (d.white < 0 || d.white >= static_cast<CellId>(steps_.size())) return false;
    return step(d.white) == d.direction && mate(d.white) == d.black;
}

bool operator==(const Tiling& a, const Tiling& b) {
    if (a.region_ != b.region_ && !same_region(*a.region_, *b.region_)) return false;
    return a.hash_ == b.hash_ && a.steps_ == b.steps_;
}

Tiling Tiling::with_dimers(std::span<const Dimer> removed, std::span<const Dimer> inserted) const {
    std::vector<std::uint8_t> steps = steps_;
    for (const Dimer& d : removed) {
        if (!contains(d)) {
            throw TilingError(d.white, "stale move: dimer at " + describe(*region_, d.white) + " is not in the tiling");
        }
        steps[static_cast<std::size_t>(d.white)] = kFree;
        steps[static_cast<std::size_t>(d.black)] = kFree;
    }
    for (const Dimer& d : inserted) {
        for (CellId c : {d.white, d.black}) {
            if (steps[static_cast<std::size_t>(c)] != kFree) {
                throw TilingError(c, "cell covered twice " + describe(*region_, c));
            }
        }
        steps[static_cast<std::size_t>(d.white)] = static_cast<std::uint8_t>(d.direction);
        steps[static_cast<std::size_t>(d.black)] = static_cast<std::uint8_t>(dir::opposite(d.direction));
    }
    return Tiling(region_, std::move(steps));
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

struct Search {
    const Region& region;
    const TilingEnumerator::Order& order;
    std::vector<std::uint8_t> steps;

    template <typename Leaf>
    bool run(std::size_t from, Leaf& leaf) {
        const std::size_t n = steps.size();
        while (from < n && steps[from] != kFree) ++from;
        if (from == n) return leaf(steps);
        const CellId c = static_cast<CellId>(from);
        for (int d : order) {
            if (!region.is_representative_step(c, d)) continue;
            const CellId m = region.neighbor(c, d);
            if (m == kNoCell || steps[static_cast<std::size_t>(m)] != kFree) continue;
            steps[from] = static_cast<std::uint8_t>(d);
            steps[static_cast<std::size_t>(m)] = static_cast<std::uint8_t>(dir::opposite(d));
            const bool go_on = run(from + 1, leaf);
            steps[from] = kFree;
            steps[static_cast<std::size_t>(m)] = kFree;
            if (!go_on) return false;
        }
        return true;
    }

    // Collect partial assignments after `depth` dimers have been placed.
    void prefixes(std::size_t from, int depth, std::vector<std::vector<std::uint8_t>>& out) {
        const std::size_t n = steps.size();
        while (from < n && steps[from] != kFree) ++from;
        if (depth == 0 || from == n) {
            out.push_back(steps);
            return;
        }
        const CellId c = static_cast<CellId>(from);
        for (int d : order) {
            if (!region.is_representative_step(c, d)) continue;
            const CellId m = region.neighbor(c, d);
            if (m == kNoCell || steps[static_cast<std::size_t>(m)] != kFree) continue;
            steps[from] = static_cast<std::uint8_t>(d);
            steps[static_cast<std::size_t>(m)] = static_cast<std::uint8_t>(dir::opposite(d));
            prefixes(from + 1, depth - 1, out);
            steps[from] = kFree;
            steps[static_cast<std::size_t>(m)] = kFree;
        }
    }
};

}  // namespace

TilingEnumerator::TilingEnumerator(RegionPtr region, Order order) : region_(std::move(region)), order_(order) {
    Order sorted = order_;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != kCanonicalOrder) throw std::invalid_argument("neighbor order must be a permutation of 0..5");
}

std::uint64_t TilingEnumerator::for_each(const std::function<bool(const Tiling&)>& visit) const {
    Search search{*region_, order_, std::vector<std::uint8_t>(region_->size(), kFree)};
    std::uint64_t visited = 0;
    auto leaf = [&](const std::vector<std::uint8_t>& steps) {
        ++visited;
        return visit(Tiling(Tiling::Unchecked{}, region_, steps));
    };
    search.run(0, leaf);
    return visited;
}

std::uint64_t TilingEnumerator::count(unsigned threads) const {
    Search root{*region_, order_, std::vector<std::uint8_t>(region_->size(), kFree)};
    auto count_leaf = [](std::uint64_t& counter) {
        return [&counter](const std::vector<std::uint8_t>&) {
            ++counter;
            return true;
        };
    };
    if (threads <= 1 || region_->size() < 16) {
        std::uint64_t n = 0;
        auto leaf = count_leaf(n);
        root.run(0, leaf);
        return n;
    }
    std::vector<std::vector<std::uint8_t>> work;
    for (int depth = 1; depth <= static_cast<int>(region_->size() / 2); ++depth) {
        work.clear();
        root.prefixes(0, depth, work);
        if (work.size() >= 8 * threads) break;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::uint64_t> partial(threads, 0);
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) {
        pool.emplace_back([&, i] {
            for (std::size_t j = next++; j < work.size(); j = next++) {
                Search s{*region_, order_, work[j]};
                auto leaf = count_leaf(partial[i]);
                s.run(0, leaf);
            }
        });
    }
    for (auto& t : pool) t.join();
    std::uint64_t total = 0;
    for (auto p : partial) total += p;
    return total;
}

std::vector<Tiling> TilingEnumerator::collect(std::size_t limit) const {
    std::vector<Tiling> out;
    if (limit == 0) return out;
    for_each([&](const Tiling& t) {
        out.push_back(t);
        return out.size() < limit;
    });
    return out;
}

std::vector<Tiling> enumerate_tilings(const RegionPtr& region) { return TilingEnumerator(region).collect(); }

Tiling base_tiling(const RegionPtr& region, int axis) {
    if (axis < 0 || axis > 2) throw std::invalid_argument("axis must be 0, 1 or 2");
    const Region& r = *region;
    const auto a = static_cast<std::size_t>(axis);
    if (r.kind() != RegionKind::voxels && r.extent()[a] % 2 != 0) {
        throw std::invalid_argument(std::string("odd extent along ") + "xyz"[a] + ": no base tiling along this axis");
    }
    std::vector<std::uint8_t> steps(r.size(), kFree);
    for (CellId c = 0; c < static_cast<CellId>(r.size()); ++c) {
        const Vec3& p = r.coords(c);
        const bool lower = ((p[a] % 2) + 2) % 2 == 0;
        int d = dir::make(axis, lower ? +1 : -1);
        CellId m = r.neighbor(c, d);
        if (m != kNoCell && !r.is_representative_step(c, d)) d = dir::opposite(d);
        if (m == kNoCell) {
            throw std::invalid_argument("odd extent along " + std::string(1, "xyz"[a]) + ": cell " + describe(r, c) +
                                        " has no partner");
        }
        steps[static_cast<std::size_t>(c)] = static_cast<std::uint8_t>(d);
    }
    return Tiling(region, std::move(steps));
}

std::size_t CycleSystem::nontrivial_count() const {
    return static_cast<std::size_t>(std::count_if(cycles.begin(), cycles.end(), [](const Cycle& c) { return !c.trivial(); }));
}

CycleSystem diff_cycles(const Tiling& t1, const Tiling& t0) {
    const Region& r = t1.region();
    if (&r != &t0.region() && !same_region(r, t0.region())) {
        throw std::invalid_argument("diff_cycles: tilings belong to different regions");
    }
    CycleSystem out;
    std::vector<char> seen(r.size(), 0);
    for (CellId start = 0; start < static_cast<CellId>(r.size()); ++start) {
        if (seen[static_cast<std::size_t>(start)] || r.color(start) != Color::white) continue;
        Cycle cycle;
        CellId cur = start;
        do {
            const int s1 = t1.step(cur);
            const CellId black = t1.mate(cur);
            cycle.cells.push_back(cur);
            cycle.steps.push_back(s1);
            cycle.cells.push_back(black);
            const int s0 = t0.step(black);
            cycle.steps.push_back(s0);
            seen[static_cast<std::size_t>(cur)] = 1;
            seen[static_cast<std::size_t>(black)] = 1;
            cur = t0.mate(black);
        } while (cur != start);
        out.cycles.push_back(std::move(cycle));
    }
    return out;
}

Tiling refine_tiling(const Tiling& t, int k, const RegionPtr& target) {
    if (k < 0) throw std::invalid_argument("refinement level must be nonnegative");
    if (k == 0) return t;
    RegionPtr refined = target ? target : refine_region(t.region_ptr(), k);
    const Region& src = t.region();
    const Region& dst = *refined;
    int scale = 1;
    for (int i = 0; i < k; ++i) scale *= 5;
    if (dst.size() != src.size() * static_cast<std::size_t>(scale) * scale * scale) {
        throw std::invalid_argument("refine_tiling: target region does not match the refinement level");
    }
    std::vector<std::uint8_t> steps(dst.size(), kFree);
    for (const Dimer& d : t.dimers()) {
        const int axis = d.axis();
        const auto a = static_cast<std::size_t>(axis);
        // The lower cell is the one the +axis step starts from.
        const CellId lower = dir::sign(d.direction) > 0 ? d.white : d.black;
        const Vec3& p = src.coords(lower);
        const std::size_t b = (a + 1) % 3, c = (a + 2) % 3;
        for (int i = 0; i < scale; ++i) {
            for (int j = 0; j < scale; ++j) {
                for (int s = 0; s < 2 * scale; s += 2) {
                    Vec3 q;
                    q[a] = scale * p[a] + s;
                    q[b] = scale * p[b] + i;
                    q[c] = scale * p[c] + j;
                    const CellId lo = dst.find(q);
                    q[a] += 1;
                    const CellId hi = dst.find(q);
                    steps[static_cast<std::size_t>(lo)] = static_cast<std::uint8_t>(dir::make(axis, +1));
                    steps[static_cast<std::size_t>(hi)] = static_cast<std::uint8_t>(dir::make(axis, -1));
                }
            }
        }
    }
    return Tiling(std::move(refined), std::move(steps));
}

}  // namespace tritile
