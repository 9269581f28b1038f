#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace tritile {

using Vec3 = std::array<std::int32_t, 3>;
using CellId = std::int32_t;

class Region;
using RegionPtr = std::shared_ptr<const Region>;
inline constexpr CellId kNoCell = -1;

enum class Color : std::int8_t { white = -1, black = +1 };

inline constexpr int to_int(Color c) { return static_cast<int>(c); }

enum class RegionKind { box, torus, voxels };

const char* to_string(RegionKind kind);

/// Lattice step directions, in the canonical neighbor order
/// +x, -x, +y, -y, +z, -z. A direction is encoded as 2 * axis + (negative ? 1 : 0).
namespace dir {
inline constexpr int count = 6;
constexpr int axis(int d) { return d >> 1; }
constexpr int sign(int d) { return (d & 1) ? -1 : +1; }
constexpr int opposite(int d) { return d ^ 1; }
constexpr int make(int axis, int sign) { return 2 * axis + (sign < 0 ? 1 : 0); }
constexpr Vec3 vector(int d) {
    Vec3 v{0, 0, 0};
    v[static_cast<std::size_t>(axis(d))] = sign(d);
    return v;
}
const char* name(int d);
}  // namespace dir

/// Why a candidate region was rejected.
enum class Violation {
    empty,
    duplicate_cell,
    coordinate_range,
    unbalanced,
    disconnected,
    odd_period,
    non_manifold_edge,
    non_manifold_vertex,
    bad_dimensions,
};

const char* to_string(Violation v);

class RegionError : public std::runtime_error {
public:
    RegionError(Violation v, const std::string& what)
        : std::runtime_error(what), violation_(v) {}
    Violation violation() const noexcept { return violation_; }

private:
    Violation violation_;
};

/// An exterior unit square: the face of `cell` in direction `dir` with no
/// neighbor behind it.
struct BoundaryFace {
    CellId cell;
    int dir;
};

/// A cubiculated region: a finite set of unit cubes with checkerboard colors,
/// the face-adjacency graph of the dual complex and the exterior faces.
/// Cells are indexed in lexicographic order of their coordinates.
/// Immutable after construction.
class Region {
public:
    RegionKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return coords_.size(); }

    const Vec3& coords(CellId c) const { return coords_[static_cast<std::size_t>(c)]; }
    std::span<const Vec3> cells() const noexcept { return coords_; }

    Color color(CellId c) const {
        const Vec3& p = coords(c);
        return color_at(p);
    }
    Color color_at(const Vec3& p) const {
        const long long s = static_cast<long long>(p[0]) + p[1] + p[2] + parity_;
        return (s % 2 == 0) ? Color::black : Color::white;
    }

    /// Neighbor of `c` across its face in direction `d`, or kNoCell.
    CellId neighbor(CellId c, int d) const {
        return adjacency_[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)];
    }

    /// Whether stepping from `c` in direction `d` is the stored representative of
    /// that adjacency. Only false on period-2 torus axes, where both directions
    /// reach the same cell: white cells use the +axis step, black cells the
    /// -axis step, so the dimer direction from white is always +axis.
    bool is_representative_step(CellId c, int d) const {
        if (!degenerate_axis_[static_cast<std::size_t>(dir::axis(d))]) return true;
        const bool positive = dir::sign(d) > 0;
        return (color(c) == Color::white) == positive;
    }

    /// Cell at lattice point `p` (reduced modulo the periods on a torus), or kNoCell.
    CellId find(const Vec3& p) const;

    /// Box dimensions (box kind) or periods (torus kind).
    const Vec3& extent() const noexcept { return extent_; }
    std::optional<Vec3> periods() const {
        if (kind_ == RegionKind::torus) return extent_;
        return std::nullopt;
    }
    /// Per-axis flag: torus period equal to 2 along this axis.
    const std::array<bool, 3>& degenerate_axes() const noexcept { return degenerate_axis_; }
    bool degenerate_adjacency() const noexcept {
        return degenerate_axis_[0] || degenerate_axis_[1] || degenerate_axis_[2];
    }

    /// 0: black iff x+y+z even; 1: black iff x+y+z odd.
    int parity() const noexcept { return parity_; }

    std::vector<BoundaryFace> boundary_faces() const;

    /// Reduce a lattice point into the fundamental domain (identity unless torus).
    Vec3 wrap(Vec3 p) const;

    std::size_t count(Color c) const;

private:
    friend RegionPtr build_box(int, int, int);
    friend RegionPtr build_torus(int, int, int);
    friend RegionPtr build_voxel_region(std::vector<Vec3>, int);
    friend RegionPtr refine_region(const RegionPtr&, int);

    Region() = default;
    void index_cells();
    void build_adjacency();

    RegionKind kind_ = RegionKind::box;
    int parity_ = 0;
    Vec3 extent_{0, 0, 0};
    std::array<bool, 3> degenerate_axis_{false, false, false};
    std::vector<Vec3> coords_;
    std::vector<std::array<CellId, 6>> adjacency_;

    // Coordinate lookup: dense grid over the bounding box when small, hash map otherwise.
    Vec3 lo_{0, 0, 0};
    Vec3 span_{0, 0, 0};
    std::vector<CellId> grid_;
    std::unordered_map<std::uint64_t, CellId> sparse_;
};

/// Box [0,L] x [0,M] x [0,N]; at least one dimension must be even.
RegionPtr build_box(int L, int M, int N);

/// Rectangular torus R^3 / (aZ x bZ x cZ); all periods even and >= 2.
RegionPtr build_torus(int a, int b, int c);

/// Arbitrary voxel set, validated by local manifold checks, connectivity and
/// color balance (in that order). Throws RegionError naming the first failure.
RegionPtr build_voxel_region(std::vector<Vec3> cells, int parity = 0);

/// Subdivide every cube into 5 x 5 x 5 cubes, k times.
RegionPtr refine_region(const RegionPtr& region, int k);

/// True when both regions have the same kind, parity, extent and cell list.
bool same_region(const Region& a, const Region& b);

}  // namespace tritile
