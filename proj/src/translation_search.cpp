#include "tivreg/translation_search.hpp"

#include <algorithm>
#include <array>
#include <optional>

#include "tivreg/error.hpp"

namespace tivreg {

namespace {

class TranslationProblem {
 public:
  TranslationProblem(const PointCloud& model, const VolumeIndex& scene, double epsilon, const SearchCube& root,
                     const SearchConfig& config)
      : model_(model), scene_(scene), epsilon_(epsilon), root_(root), config_(config) {}

  SearchCube root() const { return root_; }

  bool admissible(const SearchCube&) const { return true; }

  std::vector<std::size_t> grid_bounds(std::span<const SearchCube> cubes) const {
    if (cubes.empty()) return {};
    const std::size_t m = model_.size();
    half_widths_.assign(m, epsilon_ + cubes.front().half_side);
    centers_.resize(cubes.size() * m);
    for (std::size_t g = 0; g < cubes.size(); ++g) {
      for (std::size_t i = 0; i < m; ++i) centers_[g * m + i] = model_[i] + cubes[g].center;
    }
    return count_occupied(scene_, GroupedCubes{centers_, half_widths_}, config_.bound, config_.execution);
  }

  std::vector<std::size_t> upper_bounds(std::span<const SearchCube> cubes) const {
    std::vector<std::size_t> out = grid_bounds(cubes);
    for (std::size_t g = 0; g < cubes.size(); ++g) {
      if (!small(cubes[g]) || out[g] == 0) continue;
      Vector3 unused;
      if (const auto exact = cell_maximum(cubes[g], kFaceSlack, unused)) out[g] = std::min(out[g], *exact);
    }
    return out;
  }

  // The center, and in small cells the maximizer of the box arrangement.
  std::size_t lower_bound(const SearchCube& cube, std::size_t upper, Vector3& parameter) const {
    parameter = cube.center;
    const std::size_t at_center = objective_at(parameter);
    if (at_center >= upper || !small(cube)) return at_center;
    Vector3 witness;
    if (!cell_maximum(cube, 0.0, witness)) return at_center;
    const std::size_t at_witness = objective_at(witness);
    if (at_witness <= at_center) return at_center;
    parameter = witness;
    return at_witness;
  }

  std::size_t objective_at(const Vector3& t) const {
    return objective_t(model_, scene_.buckets, t, epsilon_, config_.execution);
  }

 private:
  // Relative face inflation that keeps the exact cell bound an over-count
  // under rounding.
  static constexpr double kFaceSlack = 1e-9;
  static constexpr std::size_t kMaxCrossing = 24;

  bool small(const SearchCube& cube) const { return cube.half_side <= 0.5 * epsilon_; }

  // Largest consensus inside the cell, from the boxes {t : |s - p - t| <= eps}:
  // model points with a box covering the whole cell, plus the deepest point
  // of the boxes that only cross it. A deepest point can be pushed down on
  // every axis until it meets a lower face or the cell, so those coordinates
  // are the only candidates. Nothing is returned when too many boxes cross.
  std::optional<std::size_t> cell_maximum(const SearchCube& cube, double slack, Vector3& witness) const {
    struct Crossing {
      Vector3 lo, hi;
      std::uint32_t point;
    };
    const double eps = epsilon_ * (1.0 + slack);
    const double h = cube.half_side;
    const Vector3 cell_lo = cube.center - Vector3::Constant(h);
    const Vector3 cell_hi = cube.center + Vector3::Constant(h);
    const auto& buckets = scene_.buckets;
    std::size_t covered = 0;
    std::vector<Crossing> crossing;
    for (std::size_t i = 0; i < model_.size(); ++i) {
      const Point3 q = model_[i] + cube.center;
      const CellBox cells = snap_cube(buckets.grid(), q, eps + h, QueryMode::Enclosing);
      if (cells.empty()) continue;
      bool covers = false;
      const std::size_t before = crossing.size();
      for (int z = cells.first[2]; z < cells.last[2] && !covers; ++z) {
        for (int y = cells.first[1]; y < cells.last[1] && !covers; ++y) {
          for (int x = cells.first[0]; x < cells.last[0] && !covers; ++x) {
            for (const auto& s : buckets.cell_points(x, y, z)) {
              const double dist = (s - q).cwiseAbs().maxCoeff();
              if (dist > eps + h) continue;
              if (dist <= eps - h) {
                covers = true;
                break;
              }
              const Vector3 d = s - model_[i];
              crossing.push_back({(d - Vector3::Constant(eps)).cwiseMax(cell_lo),
                                  (d + Vector3::Constant(eps)).cwiseMin(cell_hi), static_cast<std::uint32_t>(i)});
            }
          }
        }
      }
      if (covers) {
        crossing.resize(before);
        ++covered;
      }
      if (crossing.size() > kMaxCrossing) return std::nullopt;
    }
    witness = cube.center;
    if (crossing.empty()) return covered;

    std::array<std::vector<double>, 3> candidates;
    for (int a = 0; a < 3; ++a) {
      candidates[a].push_back(cell_lo[a]);
      for (const auto& c : crossing) candidates[a].push_back(c.lo[a]);
    }
    std::size_t best = 0;
    std::vector<std::uint32_t> seen(model_.size(), 0);
    std::uint32_t stamp = 0;
    for (double x : candidates[0]) {
      for (double y : candidates[1]) {
        for (double z : candidates[2]) {
          const Vector3 t(x, y, z);
          ++stamp;
          std::size_t count = 0;
          Vector3 lo = cell_lo, hi = cell_hi;
          for (const auto& c : crossing) {
            if ((t.array() < c.lo.array()).any() || (t.array() > c.hi.array()).any()) continue;
            lo = lo.cwiseMax(c.lo);
            hi = hi.cwiseMin(c.hi);
            if (seen[c.point] != stamp) {
              seen[c.point] = stamp;
              ++count;
            }
          }
          if (count > best) {
            best = count;
            witness = 0.5 * (lo + hi);
          }
        }
      }
    }
    return covered + best;
  }

  const PointCloud& model_;
  const VolumeIndex& scene_;
  double epsilon_;
  SearchCube root_;
  SearchConfig config_;
  mutable std::vector<double> half_widths_;
  mutable std::vector<Point3> centers_;
};

}  // namespace

SearchCube enclosing_cube(const Box3& range) {
  const Vector3 extent = range.max() - range.min();
  if (!range.min().allFinite() || !range.max().allFinite() || !(extent.minCoeff() > 0.0)) {
    throw Error(ErrorCode::DegenerateBounds, "translation range must have positive extent on every axis");
  }
  return SearchCube{range.center(), 0.5 * extent.maxCoeff(), 0};
}

std::size_t objective_t(const PointCloud& model_rotated, const BucketGrid& scene, const Vector3& t, double epsilon,
                        Execution exec) {
  std::vector<Point3> moved;
  moved.reserve(model_rotated.size());
  for (const auto& p : model_rotated) moved.push_back(p + t);
  return count_consensus(scene, moved, epsilon, exec);
}

std::size_t upper_bound_t(const PointCloud& model_rotated, const VolumeIndex& scene, const SearchCube& cube,
                          double epsilon, BoundEvaluation mode, Execution exec) {
  SearchConfig config;
  config.bound = mode;
  config.execution = exec;
  TranslationProblem problem(model_rotated, scene, epsilon, cube, config);
  const std::array<SearchCube, 1> cubes{cube};
  return problem.upper_bounds(cubes)[0];
}

VolumeIndex build_translation_index(const PointCloud& scene, double epsilon, const Resolution& resolution) {
  return build_volume_index(scene.points(), resolution, padded_bounds(scene.points(), epsilon));
}

TranslationSearchResult bnb_translation_search(const PointCloud& model_rotated, const VolumeIndex& scene,
                                               double epsilon, const Box3& range, const SearchConfig& config) {
  if (model_rotated.empty() || scene.volume.total_points() == 0) {
    throw Error(ErrorCode::EmptyInput, "translation search needs a non-empty model and scene");
  }
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "inlier threshold must be positive");
  TranslationProblem problem(model_rotated, scene, epsilon, enclosing_cube(range), config);
  BnbOutcome outcome = best_first_search(problem, config);

  TranslationSearchResult result;
  result.best_translation = outcome.best_parameter;
  result.best_count = outcome.best_count;
  result.final_upper_bound = outcome.final_upper_bound;
  result.iterations = outcome.iterations;
  result.status = outcome.status;
  result.bound_trace = std::move(outcome.trace);
  result.stats = outcome.stats;
  return result;
}

TranslationSearchResult bnb_translation_search(const PointCloud& model_rotated, const PointCloud& scene,
                                               double epsilon, const Box3& range, const SearchConfig& config,
                                               const Resolution& resolution) {
  if (model_rotated.empty() || scene.empty()) {
    throw Error(ErrorCode::EmptyInput, "translation search needs a non-empty model and scene");
  }
  const VolumeIndex index = build_translation_index(scene, epsilon, resolution);
  return bnb_translation_search(model_rotated, index, epsilon, range, config);
}

}  // namespace tivreg
