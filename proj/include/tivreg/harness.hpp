#pragma once

// Synthetic degradation, evaluation metrics, brute-force consensus oracle and
// the repeated-trial experiment driver.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tivreg/geometry.hpp"
#include "tivreg/pipeline.hpp"

namespace tivreg {

enum class DegradationKind { Outliers, Missing, Noise };

std::string_view to_string(DegradationKind kind);
/// Throws Error(InvalidArgument) for unknown names.
DegradationKind parse_degradation_kind(std::string_view name);

struct DegradationSpec {
  DegradationKind kind = DegradationKind::Outliers;
  double magnitude = 0.0;  // outlier ratio / missing fraction / noise sigma
  std::uint64_t seed = 0;

  /// Throws Error(InvalidArgument) unless fractions lie in [0,1) and sigma >= 0.
  void validate() const;
};

struct Correspondence {
  std::uint32_t model = 0;
  std::uint32_t scene = 0;
};

struct Instance {
  PointCloud model;
  PointCloud scene;
  RigidTransform truth;  // scene ~ truth(model)
  RotationVector truth_rotation;
  std::vector<Correspondence> correspondences;
};

/// Rotation with axis uniform on the sphere and angle uniform in [0, pi];
/// translation uniform in [-translation_half_range, translation_half_range]^3.
RigidTransform random_rigid_transform(std::mt19937_64& rng, double translation_half_range = 0.5,
                                      RotationVector* rotation = nullptr);

/// Outliers: round(magnitude * |base|) points uniform in [0,1]^3 are added to
/// the base before the transform is applied, so the scene is truth(base) plus
/// transformed outliers. Missing: that fraction of points is removed from the
/// model; the scene keeps all of them. Noise: i.i.d. Gaussian per scene
/// coordinate. Throws Error(EmptyInput) for an empty base.
Instance make_instance(const PointCloud& base, const DegradationSpec& spec);

/// RMS L2 distance between estimated(model[c.model]) and scene[c.scene].
/// Throws Error(NoCorrespondences) when the list is empty.
double rms_error(const RigidTransform& estimated, std::span<const Correspondence> correspondences,
                 const PointCloud& model, const PointCloud& scene);

enum class Norm { L2, Linf };

/// Exhaustive O(M N) consensus count of transform(model) against scene.
std::size_t brute_force_consensus(const PointCloud& model, const PointCloud& scene, const RigidTransform& transform,
                                  double epsilon, Norm norm);

enum class Profile { Clean, Outliers, Missing, Noise, Scalability };

std::string_view to_string(Profile profile);
Profile parse_profile(std::string_view name);

struct NamedCloud {
  std::string name;
  PointCloud cloud;  // dense base, already in the unit cube
};

struct ExperimentConfig {
  Profile profile = Profile::Clean;
  std::vector<double> sweep;  // magnitudes; point counts for Scalability
  std::size_t repetitions = 20;
  std::size_t points = 500;
  std::uint64_t seed = 1;
  // Profile defaults when unset: epsilon 0.005 (0.01 for Noise);
  // TIVs delete 5000 keep 200 (delete 0 for Noise; delete 0, keep 20% of N for Scalability).
  std::optional<double> epsilon;
  std::optional<std::size_t> tiv_delete;
  std::optional<std::size_t> tiv_keep;
  RegistrationConfig registration;  // epsilon/TIV fields are overwritten per trial
  bool parallel_trials = false;

  /// Sweep used when `sweep` is empty.
  std::vector<double> default_sweep() const;
};

struct TrialRecord {
  std::string model;
  Profile profile = Profile::Clean;
  DegradationSpec spec;
  std::size_t trial = 0;
  std::size_t model_points = 0;
  std::size_t scene_points = 0;
  double epsilon = 0.0;
  RotationVector truth_rotation;
  RigidTransform truth;
  RigidTransform estimate;
  RotationVector estimate_rotation;
  double angular_error_deg = 0.0;
  double translation_error = 0.0;
  double rms = 0.0;
  bool success = false;
  StageTimings timings;
  std::size_t rotation_count = 0;
  std::size_t rotation_upper = 0;
  std::size_t translation_count = 0;
  std::size_t translation_upper = 0;
  std::size_t rotation_iterations = 0;
  std::size_t translation_iterations = 0;
  SearchStatus status = SearchStatus::Optimal;

  std::size_t certificate_gap() const { return (rotation_upper - rotation_count) + (translation_upper - translation_count); }
};

struct SummaryRow {
  std::string model;
  double magnitude = 0.0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double mean_total_seconds = 0.0;
  double median_total_seconds = 0.0;
  double mean_rotation_seconds = 0.0;
  double median_rotation_seconds = 0.0;
  double mean_translation_seconds = 0.0;
  double median_translation_seconds = 0.0;
  double median_index_seconds = 0.0;
  double median_tiv_seconds = 0.0;
  double median_angular_error_deg = 0.0;
  double max_angular_error_deg = 0.0;
  double median_rms = 0.0;
  double max_rms = 0.0;

  double success_rate() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / trials; }
};

struct ExperimentReport {
  std::vector<TrialRecord> trials;
  std::vector<SummaryRow> summary;
};

/// Success criterion for one trial.
inline bool trial_succeeded(double rms, double epsilon) { return rms <= 2.0 * epsilon; }

/// Per-trial seed derived from the master seed and the trial's global index.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index);

/// Runs `repetitions` trials per (model, sweep value). Trial seeds depend only
/// on the master seed and the trial index.
ExperimentReport run_experiment(const ExperimentConfig& config, std::span<const NamedCloud> models);

std::vector<SummaryRow> summarize(std::span<const TrialRecord> trials);

/// RFC-4180 CSV, header included. Timing columns only when `timings` is set,
/// so that files written without them are reproducible byte for byte.
void write_trials_csv(std::ostream& out, std::span<const TrialRecord> trials, bool timings);
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows, bool timings);

/// Bound evolution (iteration, [seconds,] upper, lower) of one search stage.
void write_trace_csv(std::ostream& out, std::string_view stage, std::span<const TracePoint> trace, bool timings,
                     bool header = true);

/// Quotes a CSV field when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view value);

}  // namespace tivreg
