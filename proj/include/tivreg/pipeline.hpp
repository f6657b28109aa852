#pragma once

// End-to-end registration: optional joint normalization, TIV construction and
// selection on both clouds, rotation search on the TIVs, then translation
// search on the rotated model.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

#include "tivreg/bnb.hpp"
#include "tivreg/geometry.hpp"
#include "tivreg/integral_volume.hpp"
#include "tivreg/rotation_search.hpp"
#include "tivreg/translation_search.hpp"

namespace tivreg {

/// How scene TIVs are chosen once the model TIVs are fixed.
enum class SceneTivSelection {
  /// The model's (delete, keep) rank window applied to the scene as well.
  Rank,
  /// Every scene TIV whose norm is within sqrt(3) epsilon of the selected
  /// model norms. No scene TIV outside this window can lie within
  /// L-infinity epsilon of a rotated model TIV, so the rotation objective is
  /// the same as against all scene TIVs.
  NormWindow,
};

std::string_view to_string(SceneTivSelection selection);
/// "rank" or "norm-window"; throws Error(InvalidArgument) otherwise.
SceneTivSelection parse_scene_tiv_selection(std::string_view name);

struct RegistrationConfig {
  double epsilon = 0.005;  // shared rotation/translation inlier threshold
  Resolution iv_resolution = kDefaultResolution;
  std::size_t tiv_delete = 5000;
  std::size_t tiv_keep = 200;
  SceneTivSelection scene_tivs = SceneTivSelection::NormWindow;
  std::size_t gap_r = 0;
  std::size_t gap_t = 0;
  // nullopt: derive the range from the scene box and the rotated model box.
  std::optional<Box3> translation_range = default_translation_range();
  bool normalize = true;
  std::uint64_t rng_seed = 0;
  int max_depth = 25;
  BoundEvaluation bound = BoundEvaluation::Refined;
  Execution execution = Execution::Parallel;
  bool record_trace = true;

  /// Throws Error(InvalidArgument) when a field is out of range.
  void validate() const;
};

/// p_normalized = (p - offset) * scale.
struct Normalization {
  Vector3 offset = Vector3::Zero();
  double scale = 1.0;

  Point3 forward(const Point3& p) const { return (p - offset) * scale; }
  Point3 inverse(const Point3& p) const { return p / scale + offset; }

  /// Expresses a transform between normalized clouds in original units.
  RigidTransform denormalize(const RigidTransform& normalized) const;
};

struct NormalizedPair {
  PointCloud model;
  PointCloud scene;
  Normalization record;
};

/// One uniform scale and offset for both clouds so their union spans [0,1]^3
/// along its longest axis. Throws Error(NormalizationDegenerate) when the
/// joint bounding box has zero extent.
NormalizedPair normalize_to_unit_cube(const PointCloud& model, const PointCloud& scene);

PointCloud denormalize(const PointCloud& cloud, const Normalization& record);

struct StageTimings {
  double normalize = 0.0;
  double tiv = 0.0;  // construction + selection, both clouds
  double rotation_index = 0.0;
  double rotation_search = 0.0;
  double translation_index = 0.0;
  double translation_search = 0.0;
  double total = 0.0;

  double index_total() const { return rotation_index + translation_index; }
};

struct RegistrationResult {
  RigidTransform transform;             // original units
  RigidTransform normalized_transform;  // normalized units (equal to transform without normalization)
  Normalization normalization;
  RotationSearchResult rotation;
  TranslationSearchResult translation;
  Box3 translation_range;  // normalized units
  std::size_t model_tivs = 0;
  std::size_t scene_tivs = 0;
  StageTimings timings;
};

/// Effective (delete, keep) for a pool of `pool` TIVs: deletion shrinks so
/// that min(keep, pool) vectors remain.
std::pair<std::size_t, std::size_t> clamp_tiv_selection(std::size_t pool, std::size_t delete_top_k,
                                                         std::size_t keep_top_k);

/// Throws Error(TooFewPoints) when either cloud has fewer than two points.
RegistrationResult register_clouds(const PointCloud& model, const PointCloud& scene,
                                   const RegistrationConfig& config = {});

}  // namespace tivreg
