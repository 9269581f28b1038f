#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tritile/region.hpp"

namespace tritile {

/// A domino seen as an oriented dual edge from the center of a white cube to
/// the center of a black cube. `direction` is the lattice step white -> black
/// (on tori, the stored representative of the adjacency).
struct Dimer {
    CellId white = kNoCell;
    CellId black = kNoCell;
    int direction = 0;

    int axis() const { return dir::axis(direction); }
    friend bool operator==(const Dimer&, const Dimer&) = default;
    friend auto operator<=>(const Dimer&, const Dimer&) = default;
};

class TilingError : public std::runtime_error {
public:
    TilingError(CellId cell, const std::string& what) : std::runtime_error(what), cell_(cell) {}
    CellId cell() const noexcept { return cell_; }

private:
    CellId cell_;
};

/// A perfect matching of the dual graph, stored as the step from every cell
/// to its partner. The per-cell step array is canonical, so equality and the
/// hash do not depend on the order dimers were supplied in.
class Tiling {
public:
    /// Validates that `steps` describes a perfect matching of `region`.
    Tiling(RegionPtr region, std::vector<std::uint8_t> steps);

    /// Throws TilingError naming the first offending cell ("cell covered twice",
    /// "cell uncovered", ...).
    static Tiling from_dimers(RegionPtr region, std::span<const Dimer> dimers);

    const Region& region() const noexcept { return *region_; }
    const RegionPtr& region_ptr() const noexcept { return region_; }

    int step(CellId c) const { return steps_[static_cast<std::size_t>(c)]; }
    CellId mate(CellId c) const { return region_->neighbor(c, step(c)); }
    std::span<const std::uint8_t> steps() const noexcept { return steps_; }

    Dimer dimer_at(CellId c) const;
    /// Dimers sorted by white cell (lexicographic white coordinates).
    std::vector<Dimer> dimers() const;
    std::size_t dimer_count() const noexcept { return steps_.size() / 2; }
    bool contains(const Dimer& d) const;

    std::uint64_t hash() const noexcept { return hash_; }

    /// Same region (by pointer or by value) and same matching.
    friend bool operator==(const Tiling& a, const Tiling& b);

    /// Replace the partners of the given cells; the result is revalidated.
    Tiling with_dimers(std::span<const Dimer> removed, std::span<const Dimer> inserted) const;

private:
    struct Unchecked {};
    Tiling(Unchecked, RegionPtr region, std::vector<std::uint8_t> steps);

    RegionPtr region_;
    std::vector<std::uint8_t> steps_;
    std::uint64_t hash_ = 0;
    friend class TilingEnumerator;
    friend Tiling refine_tiling(const Tiling&, int, const RegionPtr&);
};

std::uint64_t dimer_code(const Dimer& d);
std::uint64_t tiling_hash(std::span<const std::uint8_t> steps, const Region& region);

/// Exhaustive depth-first enumeration of tilings: always match the
/// lowest-indexed uncovered cell, trying neighbors in `order` (default
/// +x,-x,+y,-y,+z,-z). Deterministic and restartable: every run from the same
/// inputs produces the same stream.
class TilingEnumerator {
public:
    using Order = std::array<int, 6>;
    static constexpr Order kCanonicalOrder{0, 1, 2, 3, 4, 5};

    explicit TilingEnumerator(RegionPtr region, Order order = kCanonicalOrder);

    /// Visit every tiling in canonical order; return false from `visit` to stop.
    /// Returns the number of tilings visited.
    std::uint64_t for_each(const std::function<bool(const Tiling&)>& visit) const;

    /// Count only. `threads` > 1 splits the search by branch prefix.
    std::uint64_t count(unsigned threads = 1) const;

    std::vector<Tiling> collect(std::size_t limit = SIZE_MAX) const;

private:
    RegionPtr region_;
    Order order_;
};

std::vector<Tiling> enumerate_tilings(const RegionPtr& region);

/// All dimers parallel to `axis`, pairing cells at offsets (2i, 2i+1) along it.
/// Throws std::invalid_argument when the extent along `axis` is odd.
Tiling base_tiling(const RegionPtr& region, int axis);

/// One oriented closed walk of t1 - t0: cells[i] -> cells[i+1] uses step
/// steps[i]; even positions start t1 dimers (white -> black), odd positions
/// reversed t0 dimers (black -> white).
struct Cycle {
    std::vector<CellId> cells;
    std::vector<int> steps;

    std::size_t length() const { return cells.size(); }
    bool trivial() const { return cells.size() == 2; }
};

struct CycleSystem {
    std::vector<Cycle> cycles;

    std::size_t nontrivial_count() const;
    std::size_t trivial_count() const { return cycles.size() - nontrivial_count(); }
};

/// Decompose t1 - t0 into vertex-disjoint oriented cycles, each starting at its
/// lowest-indexed white cell.
CycleSystem diff_cycles(const Tiling& t1, const Tiling& t0);

/// Refine k times. Each dimer becomes 125 parallel dimers per level.
/// `target` may pass a precomputed refine_region(t.region_ptr(), k).
Tiling refine_tiling(const Tiling& t, int k, const RegionPtr& target = nullptr);

}  // namespace tritile
