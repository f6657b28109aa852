#pragma once

// 3D integral volume: a cumulative-count grid over an axis-aligned cuboid
// that answers "how many points lie in this box" with eight lookups, plus a
// bucket grid over the same cells for exact point-in-box checks.
//
// Orientation: node (i, j, k) holds the number of points in cells with
// x-index < i, y-index < j and z-index < k, i.e. counts accumulate upward from
// the min corner along every axis. A starting vertex at (min x, max y, max z)
// with mixed accumulation directions is a reflection of this layout and gives
// the same box counts.
//
// Cell membership along an axis is decided against the stored node
// coordinates: cell c holds node[c] <= x < node[c+1], except the last cell,
// which is closed. Because the same comparisons bin points and snap queries,
// Enclosing/Inner counts are exact over- and under-counts with no rounding
// slack.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tivreg/geometry.hpp"

namespace tivreg {

using Resolution = std::array<int, 3>;

inline constexpr Resolution kDefaultResolution{51, 51, 51};

enum class QueryMode {
  Enclosing,  // every cell touching the query: count >= true count
  Inner,      // only cells fully inside the query: count <= true count
};

enum class OutOfBounds {
  Reject,  // points outside the bounds are not indexed
  Clamp,   // points outside the bounds go to the nearest boundary cell
};

/// Node coordinates and cell lookup shared by both structures.
class GridGeometry {
 public:
  GridGeometry() = default;
  /// Throws Error(DegenerateBounds) for a non-positive extent and
  /// Error(InvalidArgument) for a resolution below 1.
  GridGeometry(const Box3& bounds, const Resolution& resolution);

  const Box3& bounds() const noexcept { return bounds_; }
  const Resolution& resolution() const noexcept { return resolution_; }
  double node(int axis, int index) const { return nodes_[axis][static_cast<std::size_t>(index)]; }
  bool contains(const Point3& p) const;

  /// Cell index of coordinate `x` along `axis`, clamped to [0, n-1].
  int cell_of(int axis, double x) const;

  /// Half-open cell range [first, last) selected by snapping [lo, hi] per `mode`.
  /// first >= last means no cell is selected.
  std::array<int, 2> cell_range(int axis, double lo, double hi, QueryMode mode) const;

  void mark_on_node(int axis, double x);

 private:
  Box3 bounds_;
  Resolution resolution_{1, 1, 1};
  std::array<std::vector<double>, 3> nodes_;
  std::array<double, 3> inv_cell_{};
  // on_node_[axis][c]: some indexed point has coordinate exactly node(axis, c).
  std::array<std::vector<std::uint8_t>, 3> on_node_;
};

struct CellBox {
  std::array<int, 3> first{};
  std::array<int, 3> last{};
  bool empty() const { return first[0] >= last[0] || first[1] >= last[1] || first[2] >= last[2]; }
};

class IntegralVolume {
 public:
  IntegralVolume() = default;

  const GridGeometry& grid() const noexcept { return grid_; }
  std::size_t total_points() const noexcept { return total_; }

  std::uint32_t node_value(int i, int j, int k) const { return nodes_[index(i, j, k)]; }
  std::span<const std::uint32_t> node_values() const noexcept { return nodes_; }

  /// Points inside the snapped query box. Parts of the query outside the
  /// bounds are clipped away; inverted or disjoint queries count 0.
  std::size_t count_in_cuboid(const Box3& query, QueryMode mode) const;

  /// Same as count_in_cuboid for a cube of half-width `half_width` at `center`.
  std::size_t count_in_cube(const Point3& center, double half_width, QueryMode mode) const;

  /// Count over an already snapped cell box (eight-term inclusion-exclusion).
  std::size_t count_cells(const CellBox& cells) const;

 private:
  friend struct VolumeIndexBuilder;

  std::size_t index(int i, int j, int k) const {
    const auto& r = grid_.resolution();
    return (static_cast<std::size_t>(k) * static_cast<std::size_t>(r[1] + 1) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(r[0] + 1) +
           static_cast<std::size_t>(i);
  }

  GridGeometry grid_;
  std::vector<std::uint32_t> nodes_;
  std::size_t total_ = 0;
};

/// Per-cell point lists stored contiguously (cell-major).
class BucketGrid {
 public:
  BucketGrid() = default;

  const GridGeometry& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return points_.size(); }

  /// Points of cell (i, j, k) and their indices in the source cloud.
  std::span<const Point3> cell_points(int i, int j, int k) const;
  std::span<const std::uint32_t> cell_indices(int i, int j, int k) const;

  /// True iff some stored point p has dist_linf(center, p) <= epsilon.
  bool exact_consensus_exists(const Point3& center, double epsilon) const;

  /// Same test restricted to an already snapped Enclosing cell box.
  bool exists_in_cells(const CellBox& cells, const Point3& center, double epsilon) const;
  /// Same scan for the rounded cube: L2 distance at most `radius` from the
  /// cube of half-width `core` around `center`.
  bool exists_in_cells_rounded(const CellBox& cells, const Point3& center, double core, double radius) const;

 private:
  friend struct VolumeIndexBuilder;

  std::size_t cell(int i, int j, int k) const {
    const auto& r = grid_.resolution();
    return (static_cast<std::size_t>(k) * static_cast<std::size_t>(r[1]) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(r[0]) +
           static_cast<std::size_t>(i);
  }

  GridGeometry grid_;
  std::vector<std::uint32_t> cell_start_;  // size cells + 1
  std::vector<Point3> points_;
  std::vector<std::uint32_t> indices_;
};

/// Snap a cube query to cells along all three axes.
CellBox snap_cube(const GridGeometry& grid, const Point3& center, double half_width, QueryMode mode);
CellBox snap_box(const GridGeometry& grid, const Box3& query, QueryMode mode);

struct VolumeIndex {
  IntegralVolume volume;
  BucketGrid buckets;
};

/// Builds both structures over `points` in a single pass plus a prefix sum.
VolumeIndex build_volume_index(std::span<const Point3> points, const Resolution& resolution, const Box3& bounds,
                               OutOfBounds policy = OutOfBounds::Reject);

inline VolumeIndex build_volume_index(const PointCloud& cloud, const Resolution& resolution, const Box3& bounds,
                                      OutOfBounds policy = OutOfBounds::Reject) {
  return build_volume_index(cloud.points(), resolution, bounds, policy);
}

/// Bounding box of `points` grown by `padding` on every side. Axes with zero
/// extent after padding are widened so the result is never degenerate.
Box3 padded_bounds(std::span<const Point3> points, double padding);

}  // namespace tivreg
