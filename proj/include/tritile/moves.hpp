#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "tritile/tiling.hpp"

namespace tritile {

/// Exchange of two parallel dimers forming a 2x2x1 slab for the other pair
/// that covers the same four cells.
struct FlipMove {
    std::array<Dimer, 2> removed;
    std::array<Dimer, 2> inserted;
    CellId anchor = kNoCell;  // slab corner: the other cells are anchor+e_a, +e_b, +e_a+e_b
    int normal_axis = 0;      // axis perpendicular to the slab (a, b are the other two)

    FlipMove reversed() const { return {inserted, removed, anchor, normal_axis}; }
    friend bool operator==(const FlipMove&, const FlipMove&) = default;
};

/// Exchange of three mutually orthogonal dimers inside a 2x2x2 cube for the
/// other matching of the same hexagon. The two remaining cube corners are
/// antipodal and untouched.
struct TritMove {
    std::array<Dimer, 3> removed;  // ordered by axis
    std::array<Dimer, 3> inserted; // ordered by axis
    Vec3 corner{0, 0, 0};          // minimal lattice corner of the 2x2x2 cube (unwrapped)
    int sign = 0;                  // +1 positive trit, -1 negative trit

    TritMove reversed() const { return {inserted, removed, corner, -sign}; }
    friend bool operator==(const TritMove&, const TritMove&) = default;
};

/// Sign of a trit in the 2x2x2 cube around the antipodal corners o and o^7.
/// `corner` is o (0..7, bit a set = upper along axis a), `corner_color` its
/// color, and `winding` is +1 when the cycle (removed white -> black, then
/// inserted black -> white) visits the hexagon o^1, o^3, o^2, o^6, o^4, o^5
/// in that order, -1 otherwise. A positive trit raises the twist by one.
int trit_sign(int corner, Color corner_color, int winding);

std::vector<FlipMove> find_flips(const Tiling& t);
Tiling apply_flip(const Tiling& t, const FlipMove& m);

std::vector<TritMove> find_trits(const Tiling& t);
Tiling apply_trit(const Tiling& t, const TritMove& m);

enum class MoveSet { flip, flip_trit };
const char* to_string(MoveSet s);

/// Undirected move graph over a complete enumeration. Edges are stored in
/// both directions; a trit edge u -> v carries the sign of the trit that takes
/// u to v (so v -> u carries the opposite sign).
class MoveGraph {
public:
    struct Edge {
        std::uint32_t to;
        std::int8_t trit_sign;  // 0 for flips
    };

    MoveGraph(std::vector<Tiling> tilings, MoveSet moves);

    std::size_t size() const noexcept { return tilings_.size(); }
    MoveSet moves() const noexcept { return moves_; }
    const Tiling& tiling(std::size_t i) const { return tilings_[i]; }
    const std::vector<Tiling>& tilings() const noexcept { return tilings_; }
    const std::vector<Edge>& edges(std::size_t i) const { return adjacency_[i]; }
    std::size_t edge_count() const;

    /// Node index of `t`, or -1 when absent. Hash hits are confirmed by comparison.
    long index_of(const Tiling& t) const;

    /// Component id per node (ids in order of first appearance).
    const std::vector<std::uint32_t>& component_of() const noexcept { return component_; }
    std::size_t component_count() const noexcept { return component_sizes_.size(); }
    /// Component sizes sorted in decreasing order.
    std::vector<std::size_t> component_sizes() const;

    /// Number of distinct tilings that collided on the 64-bit hash.
    std::size_t hash_collisions() const noexcept { return collisions_; }

private:
    std::vector<Tiling> tilings_;
    MoveSet moves_;
    std::unordered_multimap<std::uint64_t, std::uint32_t> index_;
    std::vector<std::vector<Edge>> adjacency_;
    std::vector<std::uint32_t> component_;
    std::vector<std::size_t> component_sizes_;
    std::size_t collisions_ = 0;
};

struct TritLabeling {
    std::vector<std::int64_t> label;  // per node; meaningful only where reached
    std::vector<char> reached;
    bool consistent = true;
    /// gcd of the signed trit sums around all independent cycles (0 when consistent).
    std::int64_t discrepancy_gcd = 0;
};

/// BFS from `base`: label(base) = 0, flips keep the label, a trit edge adds its
/// sign. `consistent` is true iff every non-tree edge agrees with the labels.
TritLabeling bfs_trit_labeling(const MoveGraph& g, std::size_t base);

}  // namespace tritile
