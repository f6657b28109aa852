#include "tivreg/rotation_search.hpp"

#include <algorithm>
#include <cmath>

#include "tivreg/error.hpp"

namespace tivreg {

namespace {

class RotationProblem {
 public:
  RotationProblem(std::span<const Vector3> moving, const VolumeIndex& scene, double epsilon, const SearchConfig& config)
      : moving_(moving), scene_(scene), epsilon_(epsilon), config_(config) {
    norms_.reserve(moving.size());
    for (const auto& m : moving) norms_.push_back(m.norm());
  }

  SearchCube root() const { return SearchCube{Vector3::Zero(), kPi, 0}; }

  bool admissible(const SearchCube& cube) const { return cube_meets_pi_ball(cube); }

  std::vector<std::size_t> upper_bounds(std::span<const SearchCube> cubes) const {
    if (cubes.empty()) return {};
    // Siblings share a size, hence one set of per-vector half-widths.
    const double alpha = cube_alpha(cubes.front().half_side);
    half_widths_.resize(moving_.size());
    radii_.resize(moving_.size());
    for (std::size_t i = 0; i < moving_.size(); ++i) {
      radii_[i] = delta_r(norms_[i], alpha);
      half_widths_[i] = epsilon_ + radii_[i];
    }
    centers_.resize(cubes.size() * moving_.size());
    for (std::size_t g = 0; g < cubes.size(); ++g) {
      const Matrix3 r = rodrigues(RotationVector(cubes[g].center));
      for (std::size_t i = 0; i < moving_.size(); ++i) centers_[g * moving_.size() + i] = r * moving_[i];
    }
    return count_occupied(scene_, GroupedCubes{centers_, half_widths_, radii_}, config_.bound, config_.execution);
  }

  std::size_t lower_bound(const SearchCube& cube, std::size_t, Vector3& parameter) const {
    parameter = project_to_pi_ball(cube.center).value;
    return objective_at(parameter);
  }

  std::size_t objective_at(const Vector3& parameter) const {
    return objective_r(moving_, scene_.buckets, rodrigues(RotationVector(parameter)), epsilon_, config_.execution);
  }

 private:
  std::span<const Vector3> moving_;
  const VolumeIndex& scene_;
  double epsilon_;
  SearchConfig config_;
  std::vector<double> norms_;
  mutable std::vector<double> half_widths_;
  mutable std::vector<double> radii_;
  mutable std::vector<Point3> centers_;
};

void check_inputs(std::size_t moving, std::size_t scene, double epsilon) {
  if (moving == 0 || scene == 0) throw Error(ErrorCode::EmptyInput, "rotation search needs non-empty vector sets");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "inlier threshold must be positive");
}

}  // namespace

double delta_r(double m_norm, double alpha) {
  const double a = std::min(alpha, kPi);
  return std::sqrt(2.0 * m_norm * m_norm * (1.0 - std::cos(a)));
}

RotationVector project_to_pi_ball(const Vector3& r) {
  const double n = r.norm();
  if (n <= kPi) return RotationVector(r);
  return RotationVector(r * (kPi / n));
}

bool cube_meets_pi_ball(const SearchCube& cube) {
  Vector3 closest;
  for (int a = 0; a < 3; ++a) {
    closest[a] = std::clamp(0.0, cube.center[a] - cube.half_side, cube.center[a] + cube.half_side);
  }
  return closest.norm() <= kPi;
}

std::size_t objective_r(std::span<const Vector3> moving, const BucketGrid& scene, const Matrix3& rotation,
                        double epsilon, Execution exec) {
  std::vector<Point3> rotated;
  rotated.reserve(moving.size());
  for (const auto& m : moving) rotated.push_back(rotation * m);
  return count_consensus(scene, rotated, epsilon, exec);
}

std::size_t upper_bound_r(std::span<const Vector3> moving, const VolumeIndex& scene, const SearchCube& cube,
                          double epsilon, BoundEvaluation mode, Execution exec) {
  SearchConfig config;
  config.bound = mode;
  config.execution = exec;
  RotationProblem problem(moving, scene, epsilon, config);
  const std::array<SearchCube, 1> cubes{cube};
  return problem.upper_bounds(cubes)[0];
}

VolumeIndex build_rotation_index(std::span<const Vector3> scene, double epsilon, const Resolution& resolution) {
  return build_volume_index(scene, resolution, padded_bounds(scene, epsilon));
}

RotationSearchResult bnb_rotation_search(std::span<const Vector3> moving, const VolumeIndex& scene, double epsilon,
                                         const SearchConfig& config) {
  check_inputs(moving.size(), scene.volume.total_points(), epsilon);
  RotationProblem problem(moving, scene, epsilon, config);
  BnbOutcome outcome = best_first_search(problem, config);

  RotationSearchResult result;
  result.best_rotation = RotationVector(outcome.best_parameter);
  result.best_matrix = rodrigues(result.best_rotation);
  result.best_count = outcome.best_count;
  result.final_upper_bound = outcome.final_upper_bound;
  result.iterations = outcome.iterations;
  result.status = outcome.status;
  result.bound_trace = std::move(outcome.trace);
  result.stats = outcome.stats;
  return result;
}

RotationSearchResult bnb_rotation_search(const TivSet& moving, const TivSet& scene, double epsilon,
                                         const SearchConfig& config, const Resolution& resolution) {
  check_inputs(moving.size(), scene.size(), epsilon);
  const std::vector<Vector3> moving_vectors = moving.vectors();
  const std::vector<Vector3> scene_vectors = scene.vectors();
  const VolumeIndex index = build_rotation_index(scene_vectors, epsilon, resolution);
  return bnb_rotation_search(moving_vectors, index, epsilon, config);
}

}  // namespace tivreg
