#pragma once

// Globally optimal rotation search on TIVs: maximise the number of moving
// vectors that land within L-infinity distance epsilon of some scene vector,
// by best-first branch-and-bound over the angle-axis cube [-pi, pi]^3.

#include <cstddef>
#include <span>
#include <vector>

#include "tivreg/bnb.hpp"
#include "tivreg/geometry.hpp"
#include "tivreg/integral_volume.hpp"
#include "tivreg/kernels.hpp"
#include "tivreg/tiv.hpp"

namespace tivreg {

struct RotationSearchResult {
  RotationVector best_rotation;
  Matrix3 best_matrix = Matrix3::Identity();
  std::size_t best_count = 0;
  std::size_t final_upper_bound = 0;
  std::size_t iterations = 0;
  SearchStatus status = SearchStatus::Optimal;
  std::vector<TracePoint> bound_trace;
  SearchStats stats;

  std::size_t certificate_gap() const { return final_upper_bound - best_count; }
};

/// Radius of the ball that holds R_r m for every r within angle-axis
/// distance alpha of the center rotation: sqrt(2 |m|^2 (1 - cos(min(alpha, pi)))).
double delta_r(double m_norm, double alpha);

/// Half of the cube's space diagonal, the largest angle-axis distance from its center.
inline double cube_alpha(double half_side) { return half_side * 1.7320508075688772; }

/// Angle-axis rotation in the pi-ball: vectors longer than pi are scaled back
/// onto the ball surface.
RotationVector project_to_pi_ball(const Vector3& r);

/// True when some point of the cube lies in the closed pi-ball.
bool cube_meets_pi_ball(const SearchCube& cube);

/// Number of moving vectors m with some scene point within L-inf distance epsilon of R m.
std::size_t objective_r(std::span<const Vector3> moving, const BucketGrid& scene, const Matrix3& rotation,
                        double epsilon, Execution exec = Execution::Serial);

/// Upper bound of objective_r over every rotation in `cube`.
std::size_t upper_bound_r(std::span<const Vector3> moving, const VolumeIndex& scene, const SearchCube& cube,
                          double epsilon, BoundEvaluation mode = BoundEvaluation::Refined,
                          Execution exec = Execution::Serial);

/// Integral volume + bucket grid over scene vectors, padded by epsilon.
VolumeIndex build_rotation_index(std::span<const Vector3> scene, double epsilon,
                                 const Resolution& resolution = kDefaultResolution);

/// Throws Error(EmptyInput) if either vector set is empty or epsilon <= 0.
RotationSearchResult bnb_rotation_search(std::span<const Vector3> moving, const VolumeIndex& scene, double epsilon,
                                         const SearchConfig& config = {});

RotationSearchResult bnb_rotation_search(const TivSet& moving, const TivSet& scene, double epsilon,
                                         const SearchConfig& config = {},
                                         const Resolution& resolution = kDefaultResolution);

}  // namespace tivreg
