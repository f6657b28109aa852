#include "tivreg/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "tivreg/error.hpp"
#include "tivreg/tiv.hpp"

namespace tivreg {

namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

TivSet select_for(const PointCloud& cloud, const RegistrationConfig& config) {
  const std::vector<Tiv> all = construct_all_tivs(cloud);
  const auto [del, keep] = clamp_tiv_selection(all.size(), config.tiv_delete, config.tiv_keep);
  return select_tivs(all, del, keep);
}

// Translations that can place some rotated model point inside the scene box.
Box3 derived_translation_range(const PointCloud& model_rotated, const PointCloud& scene, double epsilon) {
  const Box3 m = model_rotated.bounding_box();
  const Box3 s = scene.bounding_box();
  Box3 range(s.min() - m.max() - Vector3::Constant(epsilon), s.max() - m.min() + Vector3::Constant(epsilon));
  return range;
}

}  // namespace

std::string_view to_string(SceneTivSelection selection) {
  return selection == SceneTivSelection::Rank ? "rank" : "norm-window";
}

SceneTivSelection parse_scene_tiv_selection(std::string_view name) {
  if (name == "rank") return SceneTivSelection::Rank;
  if (name == "norm-window") return SceneTivSelection::NormWindow;
  throw Error(ErrorCode::InvalidArgument, "scene TIV selection must be 'rank' or 'norm-window', got '" +
                                              std::string(name) + "'");
}

void RegistrationConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be a positive finite number");
  }
  for (int r : iv_resolution) {
    if (r < 1) throw Error(ErrorCode::InvalidArgument, "integral volume resolution must be at least 1");
  }
  if (tiv_keep < 1) throw Error(ErrorCode::InvalidArgument, "tiv_keep must be at least 1");
  if (max_depth < 0) throw Error(ErrorCode::InvalidArgument, "max_depth must be non-negative");
}

RigidTransform Normalization::denormalize(const RigidTransform& normalized) const {
  // s = R m + (offset - R offset + t_n / scale)
  return RigidTransform(normalized.rotation,
                        offset - normalized.rotation * offset + normalized.translation / scale);
}

NormalizedPair normalize_to_unit_cube(const PointCloud& model, const PointCloud& scene) {
  Box3 joint = model.bounding_box();
  joint.extend(scene.bounding_box());
  const double extent = joint.isEmpty() ? 0.0 : (joint.max() - joint.min()).maxCoeff();
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw Error(ErrorCode::NormalizationDegenerate, "point clouds have zero joint extent");
  }
  NormalizedPair out;
  out.record.offset = joint.min();
  out.record.scale = 1.0 / extent;
  const auto map = [&](const PointCloud& c) {
    std::vector<Point3> pts;
    pts.reserve(c.size());
    for (const auto& p : c) pts.push_back(out.record.forward(p));
    return PointCloud(std::move(pts));
  };
  out.model = map(model);
  out.scene = map(scene);
  return out;
}

PointCloud denormalize(const PointCloud& cloud, const Normalization& record) {
  std::vector<Point3> pts;
  pts.reserve(cloud.size());
  for (const auto& p : cloud) pts.push_back(record.inverse(p));
  return PointCloud(std::move(pts));
}

std::pair<std::size_t, std::size_t> clamp_tiv_selection(std::size_t pool, std::size_t delete_top_k,
                                                         std::size_t keep_top_k) {
  const std::size_t keep = std::min(keep_top_k, pool);
  const std::size_t del = std::min(delete_top_k, pool - keep);
  return {del, keep};
}

RegistrationResult register_clouds(const PointCloud& model, const PointCloud& scene, const RegistrationConfig& config) {
  config.validate();
  if (model.size() < 2 || scene.size() < 2) {
    throw Error(ErrorCode::TooFewPoints, "registration needs at least 2 points in each cloud (model " +
                                             std::to_string(model.size()) + ", scene " +
                                             std::to_string(scene.size()) + ")");
  }
  RegistrationResult result;
  Stopwatch total;
  Stopwatch watch;

  PointCloud m = model;
  PointCloud s = scene;
  if (config.normalize) {
    NormalizedPair pair = normalize_to_unit_cube(model, scene);
    m = std::move(pair.model);
    s = std::move(pair.scene);
    result.normalization = pair.record;
  }
  result.timings.normalize = watch.lap();

  const TivSet model_tivs = select_for(m, config);
  TivSet scene_tivs;
  if (config.scene_tivs == SceneTivSelection::Rank) {
    scene_tivs = select_for(s, config);
  } else {
    const double slack = std::sqrt(3.0) * config.epsilon * (1.0 + 1e-9);
    scene_tivs = select_tivs_by_norm(construct_all_tivs(s), model_tivs.tivs.back().norm - slack,
                                     model_tivs.tivs.front().norm + slack);
  }
  result.model_tivs = model_tivs.size();
  result.scene_tivs = scene_tivs.size();
  const std::vector<Vector3> moving = model_tivs.vectors();
  const std::vector<Vector3> fixed = scene_tivs.vectors();
  result.timings.tiv = watch.lap();

  const VolumeIndex rotation_index = build_rotation_index(fixed, config.epsilon, config.iv_resolution);
  result.timings.rotation_index = watch.lap();

  SearchConfig search;
  search.max_depth = config.max_depth;
  search.bound = config.bound;
  search.execution = config.execution;
  search.record_trace = config.record_trace;
  search.gap = config.gap_r;
  result.rotation = bnb_rotation_search(moving, rotation_index, config.epsilon, search);
  result.timings.rotation_search = watch.lap();

  const PointCloud rotated = apply(RigidTransform(result.rotation.best_matrix, Vector3::Zero()), m);
  const VolumeIndex translation_index = build_translation_index(s, config.epsilon, config.iv_resolution);
  result.timings.translation_index = watch.lap();

  result.translation_range =
      config.translation_range ? *config.translation_range : derived_translation_range(rotated, s, config.epsilon);
  search.gap = config.gap_t;
  result.translation =
      bnb_translation_search(rotated, translation_index, config.epsilon, result.translation_range, search);
  result.timings.translation_search = watch.lap();

  result.normalized_transform = RigidTransform(result.rotation.best_matrix, result.translation.best_translation);
  result.transform = config.normalize ? result.normalization.denormalize(result.normalized_transform)
                                      : result.normalized_transform;
  result.timings.total = total.lap();
  return result;
}

}  // namespace tivreg
