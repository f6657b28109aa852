#include "tivreg/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "tivreg/error.hpp"

namespace tivreg {

namespace {

// Below this many queries the fork/join cost dominates.
constexpr std::size_t kMinParallelWork = 512;

int g_thread_limit = 0;

std::size_t group_count(const GroupedCubes& cubes) {
  const std::size_t m = cubes.half_widths.size();
  if (m == 0) return 0;
  if (cubes.centers.size() % m != 0) {
    throw Error(ErrorCode::InvalidArgument, "grouped cube batch: centers are not a multiple of half-widths");
  }
  if (!cubes.ball_radii.empty() && cubes.ball_radii.size() != m) {
    throw Error(ErrorCode::InvalidArgument, "grouped cube batch: ball radii and half-widths differ in length");
  }
  return cubes.centers.size() / m;
}

double radius(const GroupedCubes& cubes, std::size_t i) { return cubes.ball_radii.empty() ? 0.0 : cubes.ball_radii[i]; }

int worker_count() { return g_thread_limit > 0 ? g_thread_limit : omp_get_max_threads(); }

}  // namespace

void set_thread_limit(int threads) { g_thread_limit = threads < 0 ? 0 : threads; }

int thread_limit() { return g_thread_limit; }

void configure_threads_from_env() {
  const char* value = std::getenv("TIVREG_THREADS");
  if (value == nullptr || *value == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(value, &end, 10);
  if (end == value || *end != '\0' || n < 0) {
    throw Error(ErrorCode::InvalidArgument, std::string("TIVREG_THREADS must be a non-negative integer, got '") +
                                                value + "'");
  }
  set_thread_limit(static_cast<int>(n));
}

bool cube_occupied(const VolumeIndex& index, const Point3& center, double half_width, BoundEvaluation mode,
                   double ball_radius) {
  const GridGeometry& grid = index.volume.grid();
  const CellBox outer = snap_cube(grid, center, half_width, QueryMode::Enclosing);
  if (index.volume.count_cells(outer) == 0) return false;
  if (mode == BoundEvaluation::Enclosing) return true;
  const double core = half_width - ball_radius;
  // Largest cube inside the rounded region.
  const double inscribed = core + ball_radius / std::sqrt(3.0);
  if (index.volume.count_cells(snap_cube(grid, center, inscribed, QueryMode::Inner)) > 0) return true;
  if (ball_radius <= 0.0) return index.buckets.exists_in_cells(outer, center, half_width);
  return index.buckets.exists_in_cells_rounded(outer, center, core, ball_radius);
}

namespace serial {

std::size_t count_consensus(const BucketGrid& grid, std::span<const Point3> centers, double epsilon) {
  std::size_t hits = 0;
  for (const auto& c : centers) hits += grid.exact_consensus_exists(c, epsilon) ? 1 : 0;
  return hits;
}

std::vector<std::size_t> count_occupied(const VolumeIndex& index, const GroupedCubes& cubes, BoundEvaluation mode) {
  const std::size_t groups = group_count(cubes);
  const std::size_t m = cubes.half_widths.size();
  std::vector<std::size_t> counts(groups, 0);
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t i = 0; i < m; ++i) {
      counts[g] += cube_occupied(index, cubes.centers[g * m + i], cubes.half_widths[i], mode, radius(cubes, i)) ? 1 : 0;
    }
  }
  return counts;
}

}  // namespace serial

namespace parallel {

std::size_t count_consensus(const BucketGrid& grid, std::span<const Point3> centers, double epsilon) {
  const auto n = static_cast<std::ptrdiff_t>(centers.size());
  std::size_t hits = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits) num_threads(worker_count()) \
    if (centers.size() >= kMinParallelWork)
  for (std::ptrdiff_t q = 0; q < n; ++q) {
    hits += grid.exact_consensus_exists(centers[static_cast<std::size_t>(q)], epsilon) ? 1 : 0;
  }
  return hits;
}

std::vector<std::size_t> count_occupied(const VolumeIndex& index, const GroupedCubes& cubes, BoundEvaluation mode) {
  const std::size_t groups = group_count(cubes);
  const std::size_t m = cubes.half_widths.size();
  const auto total = static_cast<std::ptrdiff_t>(groups * m);
  std::vector<std::uint8_t> occupied(groups * m, 0);
#pragma omp parallel for schedule(static) num_threads(worker_count()) if (groups * m >= kMinParallelWork)
  for (std::ptrdiff_t q = 0; q < total; ++q) {
    const auto uq = static_cast<std::size_t>(q);
    occupied[uq] = cube_occupied(index, cubes.centers[uq], cubes.half_widths[uq % m], mode, radius(cubes, uq % m)) ? 1 : 0;
  }
  std::vector<std::size_t> counts(groups, 0);
  for (std::size_t q = 0; q < groups * m; ++q) counts[q / m] += occupied[q];
  return counts;
}

}  // namespace parallel

std::size_t count_consensus(const BucketGrid& grid, std::span<const Point3> centers, double epsilon, Execution exec) {
  return exec == Execution::Parallel ? parallel::count_consensus(grid, centers, epsilon)
                                     : serial::count_consensus(grid, centers, epsilon);
}

std::vector<std::size_t> count_occupied(const VolumeIndex& index, const GroupedCubes& cubes, BoundEvaluation mode,
                                        Execution exec) {
  return exec == Execution::Parallel ? parallel::count_occupied(index, cubes, mode)
                                     : serial::count_occupied(index, cubes, mode);
}

}  // namespace tivreg
