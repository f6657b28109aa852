#pragma once

// Data-parallel inner loops of both searches. Every kernel has a plain serial
// reference in `serial::` and an OpenMP version in `parallel::`; the two must
// return identical results for identical inputs (integer counts, no
// floating-point reductions), which the unit tests check directly.

#include <cstddef>
#include <span>
#include <vector>

#include "tivreg/geometry.hpp"
#include "tivreg/integral_volume.hpp"

namespace tivreg {

enum class Execution { Serial, Parallel };

/// How an upper-bound query "is there a scene point in this cube" is answered.
enum class BoundEvaluation {
  /// Enclosing integral-volume count > 0. Fast, over-counts by up to one
  /// cell per face.
  Enclosing,
  /// Enclosing count decides "no", Inner count decides "yes", and only the
  /// queries in between fall back to an exact bucket scan. Tightest valid bound.
  Refined,
};

/// Process-wide worker cap for the parallel kernels; 0 means the OpenMP
/// default. configure_threads_from_env() applies TIVREG_THREADS if set.
void configure_threads_from_env();
void set_thread_limit(int threads);
int thread_limit();

/// A batch of cube queries sharing per-item half-widths across groups:
/// query g*M + i is centered at centers[g*M + i] with half-width
/// half_widths[i], M = half_widths.size().
///
/// With ball_radii (same length as half_widths) the query region is the
/// rounded cube: points within L2 distance ball_radii[i] of the cube of
/// half-width half_widths[i] - ball_radii[i]. The plain cube encloses it, so
/// Enclosing mode ignores the rounding and Refined mode tests it exactly.
struct GroupedCubes {
  std::span<const Point3> centers;
  std::span<const double> half_widths;
  std::span<const double> ball_radii = {};
};

namespace serial {

/// Number of centers with a stored point within L-infinity distance epsilon.
std::size_t count_consensus(const BucketGrid& grid, std::span<const Point3> centers, double epsilon);

/// For each group, the number of cubes that contain at least one indexed point.
std::vector<std::size_t> count_occupied(const VolumeIndex& index, const GroupedCubes& cubes, BoundEvaluation mode);

}  // namespace serial

namespace parallel {

std::size_t count_consensus(const BucketGrid& grid, std::span<const Point3> centers, double epsilon);

std::vector<std::size_t> count_occupied(const VolumeIndex& index, const GroupedCubes& cubes, BoundEvaluation mode);

}  // namespace parallel

std::size_t count_consensus(const BucketGrid& grid, std::span<const Point3> centers, double epsilon, Execution exec);

std::vector<std::size_t> count_occupied(const VolumeIndex& index, const GroupedCubes& cubes, BoundEvaluation mode,
                                        Execution exec);

/// Single-query occupancy test used by both kernel flavours; ball_radius 0
/// is a plain cube.
bool cube_occupied(const VolumeIndex& index, const Point3& center, double half_width, BoundEvaluation mode,
                   double ball_radius = 0.0);

}  // namespace tivreg
