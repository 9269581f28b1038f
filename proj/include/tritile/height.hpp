#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tritile/region.hpp"

namespace tritile {

/// Edge of a coquadriculated surface, oriented black -> white, with the faces
/// on its left and right. Face 0 is the distinguished face standing for the
/// surface boundary (infinity).
struct CoquadEdge {
    int black = 0;
    int white = 0;
    int left = 0;
    int right = 0;
    friend bool operator==(const CoquadEdge&, const CoquadEdge&) = default;
};

class CoquadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bipartite graph embedded in an oriented surface with boundary such that
/// every complementary face other than infinity is a square (bounded by a
/// 4-cycle of the graph). Built from an explicit incidence description.
class CoquadSurface {
public:
    static constexpr int kInfinity = 0;

    /// `face_count` includes infinity; faces are 0 .. face_count-1.
    CoquadSurface(std::vector<Color> vertex_colors, std::vector<CoquadEdge> edges, int face_count);

    std::size_t vertex_count() const noexcept { return colors_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::size_t face_count() const noexcept { return face_edges_.size(); }
    Color color(int v) const { return colors_[static_cast<std::size_t>(v)]; }
    const CoquadEdge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
    const std::vector<CoquadEdge>& edges() const noexcept { return edges_; }
    /// Edge ids incident to vertex v, in increasing order.
    const std::vector<int>& incident(int v) const { return incident_[static_cast<std::size_t>(v)]; }
    /// The four edges around a square face (empty for infinity).
    const std::vector<int>& face_edges(int f) const { return face_edges_[static_cast<std::size_t>(f)]; }

private:
    std::vector<Color> colors_;
    std::vector<CoquadEdge> edges_;
    std::vector<std::vector<int>> incident_;
    std::vector<std::vector<int>> face_edges_;
};

using Cell2 = std::array<int, 2>;

/// Planar instance: vertices are the given unit squares (black iff x+y even),
/// edges join side-adjacent squares, and faces are the 2x2 blocks fully
/// contained in the region; every other side is infinity. Throws CoquadError
/// if the cell set is empty, disconnected or unbalanced.
CoquadSurface build_planar_surface(std::vector<Cell2> cells);

/// Planar surface together with the cell coordinates it was built from.
struct PlanarSurface {
    CoquadSurface surface;
    std::vector<Cell2> cells;       // vertex id -> cell
    std::vector<Cell2> face_corner; // face id -> lower-left cell (unused for infinity)
};
PlanarSurface build_planar(std::vector<Cell2> cells);

/// A perfect matching of the surface graph: in_tiling[e] is 1 for chosen edges.
struct SurfaceTiling {
    std::vector<std::uint8_t> in_tiling;
    bool contains(int e) const { return in_tiling[static_cast<std::size_t>(e)] != 0; }
    friend bool operator==(const SurfaceTiling&, const SurfaceTiling&) = default;
    friend auto operator<=>(const SurfaceTiling&, const SurfaceTiling&) = default;
};

bool is_perfect_matching(const CoquadSurface& s, const SurfaceTiling& t);

/// All tilings, by backtracking on the lowest uncovered vertex (edges in id order).
std::vector<SurfaceTiling> enumerate_surface_tilings(const CoquadSurface& s);

/// Rational field on faces with a shared denominator; value(f) = numer[f] / denom.
struct HeightField {
    std::vector<std::int64_t> numer;
    std::int64_t denom = 1;

    bool integral() const;
    friend bool operator==(const HeightField&, const HeightField&) = default;
};

/// The unique integer field w with w(infinity) = 0 and, for every black ->
/// white edge e, w(left) - w(right) = [e in t1] - [e in t0]; nullopt when no
/// such field exists (t1 and t0 have different flux).
std::optional<HeightField> winding(const CoquadSurface& s, const SurfaceTiling& t1, const SurfaceTiling& t0);

/// Tilings sharing one flux value, in enumeration order.
struct TilingClass {
    std::vector<SurfaceTiling> members;
    bool stable = false;
};

/// Partition of all tilings into flux classes (order of first appearance).
std::vector<TilingClass> tiling_classes(const CoquadSurface& s);

/// Every edge of the graph is used by some member.
bool is_stable(const CoquadSurface& s, const TilingClass& cls);

/// Average of wind(t - u) over all members u of the class (denominator = class size).
HeightField height_function(const CoquadSurface& s, const SurfaceTiling& t, const TilingClass& cls);

struct HeightConditions {
    bool zero_at_infinity = false;   // (a)
    bool integral_offset = false;    // (b) h - reference is integer valued
    bool strict_neighbors = false;   // (c) |h(e_l) - h(e_r)| < 1 across every edge
    bool all() const { return zero_at_infinity && integral_offset && strict_neighbors; }
};

HeightConditions check_height_conditions(const CoquadSurface& s, const HeightField& h, const HeightField& reference);

/// The tiling whose height function is `h`, reading edges off the boundary
/// map relative to a known (tiling, height) pair; nullopt if the result is not
/// a perfect matching.
std::optional<SurfaceTiling> tiling_from_height(const CoquadSurface& s, const HeightField& h,
                                                const SurfaceTiling& ref_tiling, const HeightField& ref_height);

HeightField pointwise_min(const HeightField& a, const HeightField& b);
HeightField pointwise_max(const HeightField& a, const HeightField& b);

/// Whether a flip around face f is possible in t (two opposite sides of f in t).
bool can_flip(const CoquadSurface& s, const SurfaceTiling& t, int f);
/// Exchange the two tiling edges around face f for the other two.
SurfaceTiling flip_face(const CoquadSurface& s, const SurfaceTiling& t, int f);

/// Flip sequence (face ids) taking t0 to t1, descending both height functions
/// to their pointwise minimum: at each step flip the face that maximizes
/// h_cur - h_target, breaking ties by the largest h_cur (then lowest id).
/// Throws CoquadError when the tilings have different flux or the class is
/// not stable.
std::vector<int> flip_connect(const CoquadSurface& s, const SurfaceTiling& t0, const SurfaceTiling& t1,
                              const TilingClass& cls);

}  // namespace tritile
