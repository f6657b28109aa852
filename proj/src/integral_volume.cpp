#include "tivreg/integral_volume.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tivreg/error.hpp"

namespace tivreg {

namespace {

// Outward (Enclosing) or inward (Inner) nudge applied when a cube query is
// turned into a box, so that the float predicate |x - c| <= w and the box
// membership lo <= x <= hi cannot disagree at the last bit.
double snap_margin(double center, double half_width) {
  return 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(center) + std::abs(half_width));
}

}  // namespace

GridGeometry::GridGeometry(const Box3& bounds, const Resolution& resolution)
    : bounds_(bounds), resolution_(resolution) {
  for (int a = 0; a < 3; ++a) {
    if (resolution[a] < 1) {
      throw Error(ErrorCode::InvalidArgument, "grid resolution must be at least 1 per axis");
    }
    const double lo = bounds.min()[a];
    const double hi = bounds.max()[a];
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
      throw Error(ErrorCode::DegenerateBounds, "grid bounds have non-positive extent along axis " + std::to_string(a));
    }
    const int n = resolution[a];
    auto& nd = nodes_[a];
    nd.resize(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i < n; ++i) nd[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / n;
    nd[static_cast<std::size_t>(n)] = hi;
    for (int i = 0; i < n; ++i) {
      if (!(nd[static_cast<std::size_t>(i)] < nd[static_cast<std::size_t>(i) + 1])) {
        throw Error(ErrorCode::DegenerateBounds, "grid cells collapse along axis " + std::to_string(a));
      }
    }
    inv_cell_[a] = n / (hi - lo);
    on_node_[a].assign(static_cast<std::size_t>(n) + 1, 0);
  }
}

bool GridGeometry::contains(const Point3& p) const {
  for (int a = 0; a < 3; ++a) {
    if (!(p[a] >= bounds_.min()[a] && p[a] <= bounds_.max()[a])) return false;
  }
  return true;
}

int GridGeometry::cell_of(int axis, double x) const {
  const int n = resolution_[axis];
  const auto& nd = nodes_[axis];
  if (!(x > nd[0])) return 0;
  if (x >= nd[static_cast<std::size_t>(n)]) return n - 1;
  int c = static_cast<int>((x - nd[0]) * inv_cell_[axis]);
  c = std::clamp(c, 0, n - 1);
  while (c > 0 && x < nd[static_cast<std::size_t>(c)]) --c;
  while (c < n - 1 && x >= nd[static_cast<std::size_t>(c) + 1]) ++c;
  return c;
}

void GridGeometry::mark_on_node(int axis, double x) {
  const int c = cell_of(axis, x);
  if (x == nodes_[axis][static_cast<std::size_t>(c)]) on_node_[axis][static_cast<std::size_t>(c)] = 1;
  const auto top = static_cast<std::size_t>(resolution_[axis]);
  if (x == nodes_[axis][top]) on_node_[axis][top] = 1;
}

std::array<int, 2> GridGeometry::cell_range(int axis, double lo, double hi, QueryMode mode) const {
  const int n = resolution_[axis];
  const auto& nd = nodes_[axis];
  const double first_node = nd[0];
  const double last_node = nd[static_cast<std::size_t>(n)];
  if (!(lo <= hi) || hi < first_node || lo > last_node) return {0, 0};

  if (mode == QueryMode::Enclosing) {
    // A query confined to the top face meets the closed last cell only there.
    if (lo == last_node) return on_node_[axis][static_cast<std::size_t>(n)] ? std::array<int, 2>{n - 1, n} : std::array<int, 2>{0, 0};
    const int first = lo <= first_node ? 0 : cell_of(axis, lo);
    int last = n;
    if (hi < last_node) {
      const int c = cell_of(axis, hi);
      // Cell c only reaches into [lo, hi] if hi passes its lower node or a
      // point sits exactly on that node.
      last = (hi > nd[static_cast<std::size_t>(c)] || on_node_[axis][static_cast<std::size_t>(c)]) ? c + 1 : c;
    }
    return {first, last};
  }

  int first = 0;
  if (lo > first_node) {
    const int c = cell_of(axis, lo);
    first = nd[static_cast<std::size_t>(c)] >= lo ? c : c + 1;
  }
  const int last = hi >= last_node ? n : cell_of(axis, hi);
  return {first, last};
}

CellBox snap_box(const GridGeometry& grid, const Box3& query, QueryMode mode) {
  CellBox cells;
  for (int a = 0; a < 3; ++a) {
    const auto r = grid.cell_range(a, query.min()[a], query.max()[a], mode);
    cells.first[a] = r[0];
    cells.last[a] = r[1];
  }
  return cells;
}

CellBox snap_cube(const GridGeometry& grid, const Point3& center, double half_width, QueryMode mode) {
  CellBox cells;
  for (int a = 0; a < 3; ++a) {
    const double margin = snap_margin(center[a], half_width);
    const double grow = mode == QueryMode::Enclosing ? margin : -margin;
    const auto r = grid.cell_range(a, center[a] - half_width - grow, center[a] + half_width + grow, mode);
    cells.first[a] = r[0];
    cells.last[a] = r[1];
  }
  return cells;
}

std::size_t IntegralVolume::count_cells(const CellBox& c) const {
  if (c.empty()) return 0;
  const int x0 = c.first[0], x1 = c.last[0];
  const int y0 = c.first[1], y1 = c.last[1];
  const int z0 = c.first[2], z1 = c.last[2];
  const auto v = [this](int i, int j, int k) { return static_cast<std::int64_t>(nodes_[index(i, j, k)]); };
  const std::int64_t total = v(x1, y1, z1) - v(x0, y1, z1) - v(x1, y0, z1) - v(x1, y1, z0) + v(x0, y0, z1) +
                             v(x0, y1, z0) + v(x1, y0, z0) - v(x0, y0, z0);
  return static_cast<std::size_t>(total);
}

std::size_t IntegralVolume::count_in_cuboid(const Box3& query, QueryMode mode) const {
  return count_cells(snap_box(grid_, query, mode));
}

std::size_t IntegralVolume::count_in_cube(const Point3& center, double half_width, QueryMode mode) const {
  return count_cells(snap_cube(grid_, center, half_width, mode));
}

std::span<const Point3> BucketGrid::cell_points(int i, int j, int k) const {
  const std::size_t c = cell(i, j, k);
  return std::span<const Point3>(points_).subspan(cell_start_[c], cell_start_[c + 1] - cell_start_[c]);
}

std::span<const std::uint32_t> BucketGrid::cell_indices(int i, int j, int k) const {
  const std::size_t c = cell(i, j, k);
  return std::span<const std::uint32_t>(indices_).subspan(cell_start_[c], cell_start_[c + 1] - cell_start_[c]);
}

bool BucketGrid::exists_in_cells(const CellBox& cells, const Point3& center, double epsilon) const {
  if (cells.empty()) return false;
  for (int k = cells.first[2]; k < cells.last[2]; ++k) {
    for (int j = cells.first[1]; j < cells.last[1]; ++j) {
      const std::size_t row = cell(0, j, k);
      const std::uint32_t begin = cell_start_[row + static_cast<std::size_t>(cells.first[0])];
      const std::uint32_t end = cell_start_[row + static_cast<std::size_t>(cells.last[0])];
      for (std::uint32_t p = begin; p < end; ++p) {
        if (dist_linf(points_[p], center) <= epsilon) return true;
      }
    }
  }
  return false;
}

bool BucketGrid::exists_in_cells_rounded(const CellBox& cells, const Point3& center, double core,
                                         double radius) const {
  if (cells.empty()) return false;
  // Relative slack so rounding in the caller's radius never drops a boundary point.
  const double r2 = radius * radius * (1.0 + 1e-12);
  for (int k = cells.first[2]; k < cells.last[2]; ++k) {
    for (int j = cells.first[1]; j < cells.last[1]; ++j) {
      const std::size_t row = cell(0, j, k);
      const std::uint32_t begin = cell_start_[row + static_cast<std::size_t>(cells.first[0])];
      const std::uint32_t end = cell_start_[row + static_cast<std::size_t>(cells.last[0])];
      for (std::uint32_t p = begin; p < end; ++p) {
        const Vector3 excess = ((points_[p] - center).cwiseAbs().array() - core).cwiseMax(0.0).matrix();
        if (excess.squaredNorm() <= r2) return true;
      }
    }
  }
  return false;
}

bool BucketGrid::exact_consensus_exists(const Point3& center, double epsilon) const {
  return exists_in_cells(snap_cube(grid_, center, epsilon, QueryMode::Enclosing), center, epsilon);
}

struct VolumeIndexBuilder {
  static VolumeIndex build(std::span<const Point3> points, const Resolution& resolution, const Box3& bounds,
                           OutOfBounds policy) {
    GridGeometry grid(bounds, resolution);
    const auto nx = static_cast<std::size_t>(resolution[0]);
    const auto ny = static_cast<std::size_t>(resolution[1]);
    const auto nz = static_cast<std::size_t>(resolution[2]);
    const std::size_t cells = nx * ny * nz;

    std::vector<std::uint32_t> cell_of_point(points.size(), std::numeric_limits<std::uint32_t>::max());
    std::vector<std::uint32_t> histogram(cells, 0);
    std::size_t total = 0;
    for (std::size_t p = 0; p < points.size(); ++p) {
      const Point3& pt = points[p];
      if (!pt.allFinite()) continue;
      if (policy == OutOfBounds::Reject && !grid.contains(pt)) continue;
      const auto i = static_cast<std::size_t>(grid.cell_of(0, pt.x()));
      const auto j = static_cast<std::size_t>(grid.cell_of(1, pt.y()));
      const auto k = static_cast<std::size_t>(grid.cell_of(2, pt.z()));
      for (int a = 0; a < 3; ++a) grid.mark_on_node(a, pt[a]);
      const std::size_t c = (k * ny + j) * nx + i;
      cell_of_point[p] = static_cast<std::uint32_t>(c);
      ++histogram[c];
      ++total;
    }

    VolumeIndex index;
    IntegralVolume& iv = index.volume;
    iv.grid_ = grid;
    iv.total_ = total;
    iv.nodes_.assign((nx + 1) * (ny + 1) * (nz + 1), 0);
    for (std::size_t k = 0; k < nz; ++k) {
      for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
          iv.nodes_[iv.index(static_cast<int>(i + 1), static_cast<int>(j + 1), static_cast<int>(k + 1))] =
              histogram[(k * ny + j) * nx + i];
        }
      }
    }
    // Prefix sums along x, then y, then z turn cell counts into corner counts.
    const std::size_t sx = 1, sy = nx + 1, sz = (nx + 1) * (ny + 1);
    for (std::size_t k = 0; k <= nz; ++k)
      for (std::size_t j = 0; j <= ny; ++j)
        for (std::size_t i = 1; i <= nx; ++i) iv.nodes_[k * sz + j * sy + i * sx] += iv.nodes_[k * sz + j * sy + (i - 1) * sx];
    for (std::size_t k = 0; k <= nz; ++k)
      for (std::size_t j = 1; j <= ny; ++j)
        for (std::size_t i = 0; i <= nx; ++i) iv.nodes_[k * sz + j * sy + i * sx] += iv.nodes_[k * sz + (j - 1) * sy + i * sx];
    for (std::size_t k = 1; k <= nz; ++k)
      for (std::size_t j = 0; j <= ny; ++j)
        for (std::size_t i = 0; i <= nx; ++i) iv.nodes_[k * sz + j * sy + i * sx] += iv.nodes_[(k - 1) * sz + j * sy + i * sx];

    BucketGrid& bg = index.buckets;
    bg.grid_ = grid;
    bg.cell_start_.assign(cells + 1, 0);
    for (std::size_t c = 0; c < cells; ++c) bg.cell_start_[c + 1] = bg.cell_start_[c] + histogram[c];
    bg.points_.resize(total);
    bg.indices_.resize(total);
    std::vector<std::uint32_t> cursor(bg.cell_start_.begin(), bg.cell_start_.end() - 1);
    for (std::size_t p = 0; p < points.size(); ++p) {
      const std::uint32_t c = cell_of_point[p];
      if (c == std::numeric_limits<std::uint32_t>::max()) continue;
      const std::uint32_t slot = cursor[c]++;
      bg.points_[slot] = points[p];
      bg.indices_[slot] = static_cast<std::uint32_t>(p);
    }
    return index;
  }
};

VolumeIndex build_volume_index(std::span<const Point3> points, const Resolution& resolution, const Box3& bounds,
                               OutOfBounds policy) {
  return VolumeIndexBuilder::build(points, resolution, bounds, policy);
}

Box3 padded_bounds(std::span<const Point3> points, double padding) {
  if (points.empty()) return Box3(Point3::Constant(-1.0), Point3::Constant(1.0));
  Box3 box;
  for (const auto& p : points) box.extend(p);
  Point3 lo = box.min() - Point3::Constant(padding);
  Point3 hi = box.max() + Point3::Constant(padding);
  const double scale = std::max({1.0, lo.cwiseAbs().maxCoeff(), hi.cwiseAbs().maxCoeff()});
  const double min_extent = 1e-9 * scale;
  for (int a = 0; a < 3; ++a) {
    if (hi[a] - lo[a] < min_extent) {
      const double mid = 0.5 * (lo[a] + hi[a]);
      lo[a] = mid - min_extent;
      hi[a] = mid + min_extent;
    }
  }
  return Box3(lo, hi);
}

}  // namespace tivreg
