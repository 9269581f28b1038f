#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tritile/moves.hpp"
#include "tritile/tiling.hpp"

namespace tritile {

class SurfaceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedRegion : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Oriented unit square of the dual complex. `center2` is twice the center
/// (so every coordinate is an integer: even along the normal axis, odd along
/// the other two); `normal` is a direction index (+x = 0, ..., -z = 5).
struct Square {
    Vec3 center2{0, 0, 0};
    int normal = 0;

    int normal_axis() const { return dir::axis(normal); }
    friend bool operator==(const Square&, const Square&) = default;
    friend auto operator<=>(const Square&, const Square&) = default;
};

/// Unit edge of the dual complex from `lower` to its +axis neighbor. On tori
/// the two wraps of a period-2 axis give two distinct edges.
struct DualEdge {
    CellId lower = kNoCell;
    int axis = 0;

    friend bool operator==(const DualEdge&, const DualEdge&) = default;
    friend auto operator<=>(const DualEdge&, const DualEdge&) = default;
};

/// The dual edge traversed by stepping from `c` in direction `d`.
DualEdge dual_edge(const Region& r, CellId c, int d);

/// An embedded discrete surface: distinct oriented dual squares whose corners
/// are cells of the region. The boundary is computed as the oriented sum of
/// square boundaries (right-hand rule around the normal); an edge traversed
/// twice in the same direction means the orientation is incoherent and the
/// constructor throws.
class DiscreteSurface {
public:
    DiscreteSurface(RegionPtr region, std::vector<Square> squares);

    const Region& region() const noexcept { return *region_; }
    const std::vector<Square>& squares() const noexcept { return squares_; }

    /// Oriented boundary: edge -> +1 (traversed lower -> upper) or -1.
    const std::map<DualEdge, int>& boundary() const noexcept { return boundary_; }
    bool closed() const noexcept { return boundary_.empty(); }

    /// Every dual vertex covered by a square.
    const std::set<CellId>& vertices() const noexcept { return vertices_; }
    const std::set<CellId>& interior_vertices() const noexcept { return interior_; }
    const std::set<CellId>& boundary_vertices() const noexcept { return boundary_vertices_; }

    /// Whether the dual edge lies in the surface (is a side of some square).
    bool contains_edge(const DualEdge& e) const { return edges_.count(e) != 0; }
    bool contains_square(const Vec3& center2) const;
    /// Normal of the square centered at `center2` (wrapped on tori), if present.
    std::optional<int> normal_at(const Vec3& center2) const;

private:
    RegionPtr region_;
    std::vector<Square> squares_;
    std::map<Vec3, int> by_center_;
    std::set<DualEdge> edges_;
    std::map<DualEdge, int> boundary_;
    std::set<CellId> vertices_;
    std::set<CellId> interior_;
    std::set<CellId> boundary_vertices_;
};

/// color(v) times +1 / 0 / -1 as v's dimer leaves above the surface, lies in
/// it, or leaves below it. `v` must be an interior vertex of `s`.
int vertex_flow(CellId v, const Tiling& t, const DiscreteSurface& s);

/// Sum of vertex_flow over interior vertices. Requires `t` tangent to `s` at
/// the boundary; throws SurfaceError naming the first offending vertex.
std::int64_t flux_through_surface(const Tiling& t, const DiscreteSurface& s);

/// Boundary of the dual sub-box [corner, corner + dims] with outward normals.
DiscreteSurface closed_box_surface(const RegionPtr& r, const Vec3& corner, const Vec3& dims);

/// All dual squares in the plane {axis = level} of a torus, normal +axis.
DiscreteSurface cutting_surface(const RegionPtr& r, int axis, int level = 0);

/// Integer H1 class of t - t_base, t_base = base_tiling(r, x). Empty for boxes
/// (H1 = 0); for tori the signed number of times the cycles of t - t_base
/// cross each coordinate cutting plane. Throws UnsupportedRegion for voxels.
std::vector<std::int64_t> flux(const Tiling& t);

/// Same crossing count, computed directly from the two dimer sets.
std::vector<std::int64_t> flux_from_dimers(const Tiling& t, const Tiling& base);

/// gcd of |phi(t; S_a)| over the stored H2 generator surfaces (the three
/// cutting tori); 0 for boxes.
std::int64_t modulus(const Tiling& t);

/// Combinatorial twist on boxes, in quarter units: sum over dimer pairs (d, d')
/// with d' in the +axis shadow of d of det[v(d'), v(d), e_axis].
std::int64_t twist_quarters(const Tiling& t, int axis);

/// twist_quarters / 4; throws std::logic_error if that is not an integer.
/// Throws UnsupportedRegion for non-box regions.
std::int64_t twist(const Tiling& t, int axis = 2);

/// Twist of t1 relative to t0: an integer when modulus == 0, else a residue.
struct RelativeTwist {
    std::int64_t value = 0;
    std::int64_t modulus = 0;
    friend bool operator==(const RelativeTwist&, const RelativeTwist&) = default;
};

/// Boxes use the combinatorial twist. Other regions need the enumerated
/// flip+trit graph of the region: the BFS trit label of t1 from t0, reduced
/// modulo the class modulus. Throws on unequal flux, on tilings not connected
/// in the graph, or on a labeling inconsistent modulo m.
RelativeTwist relative_twist(const Tiling& t1, const Tiling& t0, const MoveGraph* graph = nullptr);

struct SurfacePredicates {
    bool balanced = false;
    bool zero_flux = false;
    bool tangent = false;
};

/// Predicates for a Seifert surface candidate of (t0, t1): the boundary of `s`
/// must be the edge set of the nontrivial cycles of t1 - t0, otherwise a
/// SurfaceError lists the missing and extra edges.
SurfacePredicates surface_predicates(const Tiling& t0, const Tiling& t1, const DiscreteSurface& s);

/// Oriented 1-chain of the nontrivial cycles of t1 - t0 (edge -> +/-1).
std::map<DualEdge, int> cycle_chain(const Tiling& t1, const Tiling& t0);

/// Unit square bounded by the four cells of a flip, oriented so its boundary
/// is inserted - removed.
DiscreteSurface flip_surface(const Tiling& t, const FlipMove& m);

/// Three squares of the trit cube meeting at one of the two untouched
/// corners (`corner_choice` 0 or 1), oriented so the boundary is
/// inserted - removed. Throws SurfaceError if that corner is not in the region.
DiscreteSurface trit_surface(const Tiling& t, const TritMove& m, int corner_choice);

}  // namespace tritile
