#pragma once

// Globally optimal translation search for an already rotated model: maximise
// the number of model points within L-infinity distance epsilon of some scene
// point after translation, by best-first branch-and-bound over a cube of
// translations. The uncertainty region of a translated point over a cell is
// itself a cube of the cell's half-side, so the bound adds no norm slack.

#include <cstddef>
#include <vector>

#include "tivreg/bnb.hpp"
#include "tivreg/geometry.hpp"
#include "tivreg/integral_volume.hpp"
#include "tivreg/kernels.hpp"

namespace tivreg {

struct TranslationSearchResult {
  Vector3 best_translation = Vector3::Zero();
  std::size_t best_count = 0;
  std::size_t final_upper_bound = 0;
  std::size_t iterations = 0;
  SearchStatus status = SearchStatus::Optimal;
  std::vector<TracePoint> bound_trace;
  SearchStats stats;

  std::size_t certificate_gap() const { return final_upper_bound - best_count; }
};

/// Default search range after unit-cube normalization.
inline Box3 default_translation_range() { return Box3(Vector3::Constant(-1.0), Vector3::Constant(1.0)); }

/// Smallest cube containing `range`, as the root cell of the search.
SearchCube enclosing_cube(const Box3& range);

std::size_t objective_t(const PointCloud& model_rotated, const BucketGrid& scene, const Vector3& t, double epsilon,
                        Execution exec = Execution::Serial);

std::size_t upper_bound_t(const PointCloud& model_rotated, const VolumeIndex& scene, const SearchCube& cube,
                          double epsilon, BoundEvaluation mode = BoundEvaluation::Refined,
                          Execution exec = Execution::Serial);

/// Integral volume + bucket grid over the scene's padded bounding box.
VolumeIndex build_translation_index(const PointCloud& scene, double epsilon,
                                    const Resolution& resolution = kDefaultResolution);

/// Throws Error(EmptyInput) for an empty model or scene and
/// Error(DegenerateBounds) for a range without positive extent.
TranslationSearchResult bnb_translation_search(const PointCloud& model_rotated, const VolumeIndex& scene,
                                               double epsilon, const Box3& range, const SearchConfig& config = {});

TranslationSearchResult bnb_translation_search(const PointCloud& model_rotated, const PointCloud& scene,
                                               double epsilon, const Box3& range = default_translation_range(),
                                               const SearchConfig& config = {},
                                               const Resolution& resolution = kDefaultResolution);

}  // namespace tivreg
