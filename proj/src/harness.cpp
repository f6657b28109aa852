#include "tivreg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <ostream>
#include <string>

#include "tivreg/cloud_io.hpp"
#include "tivreg/error.hpp"

namespace tivreg {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

DegradationKind kind_for(Profile profile) {
  switch (profile) {
    case Profile::Missing: return DegradationKind::Missing;
    case Profile::Noise: return DegradationKind::Noise;
    default: return DegradationKind::Outliers;
  }
}

}  // namespace

std::string_view to_string(DegradationKind kind) {
  switch (kind) {
    case DegradationKind::Outliers: return "outliers";
    case DegradationKind::Missing: return "missing";
    case DegradationKind::Noise: return "noise";
  }
  return "unknown";
}

DegradationKind parse_degradation_kind(std::string_view name) {
  if (name == "outliers") return DegradationKind::Outliers;
  if (name == "missing") return DegradationKind::Missing;
  if (name == "noise") return DegradationKind::Noise;
  throw Error(ErrorCode::InvalidArgument, "unknown degradation kind '" + std::string(name) + "'");
}

std::string_view to_string(Profile profile) {
  switch (profile) {
    case Profile::Clean: return "clean";
    case Profile::Outliers: return "outliers";
    case Profile::Missing: return "missing";
    case Profile::Noise: return "noise";
    case Profile::Scalability: return "scalability";
  }
  return "unknown";
}

Profile parse_profile(std::string_view name) {
  if (name == "clean") return Profile::Clean;
  if (name == "outliers") return Profile::Outliers;
  if (name == "missing") return Profile::Missing;
  if (name == "noise") return Profile::Noise;
  if (name == "scalability") return Profile::Scalability;
  throw Error(ErrorCode::InvalidArgument, "unknown profile '" + std::string(name) + "'");
}

void DegradationSpec::validate() const {
  if (!std::isfinite(magnitude)) throw Error(ErrorCode::InvalidArgument, "degradation magnitude must be finite");
  if (kind == DegradationKind::Noise) {
    if (magnitude < 0.0) throw Error(ErrorCode::InvalidArgument, "noise sigma must be non-negative");
  } else if (magnitude < 0.0 || magnitude >= 1.0) {
    throw Error(ErrorCode::InvalidArgument, "degradation fraction must lie in [0, 1)");
  }
}

RigidTransform random_rigid_transform(std::mt19937_64& rng, double translation_half_range, RotationVector* rotation) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  std::uniform_real_distribution<double> shift(-translation_half_range, translation_half_range);
  Vector3 axis;
  do {
    axis = Vector3(gauss(rng), gauss(rng), gauss(rng));
  } while (axis.norm() < 1e-12);
  const RotationVector r(axis.normalized() * angle(rng));
  const double tx = shift(rng);
  const double ty = shift(rng);
  const double tz = shift(rng);
  if (rotation != nullptr) *rotation = r;
  return RigidTransform(rodrigues(r), Vector3(tx, ty, tz));
}

Instance make_instance(const PointCloud& base, const DegradationSpec& spec) {
  spec.validate();
  if (base.empty()) throw Error(ErrorCode::EmptyInput, "cannot degrade an empty cloud");
  std::mt19937_64 rng(spec.seed);
  Instance inst;
  inst.truth = random_rigid_transform(rng, 0.5, &inst.truth_rotation);
  const std::size_t n = base.size();

  std::vector<Point3> model;
  std::vector<Point3> scene;
  switch (spec.kind) {
    case DegradationKind::Outliers: {
      model.assign(base.begin(), base.end());
      for (std::size_t i = 0; i < n; ++i) {
        scene.push_back(inst.truth.apply(base[i]));
        inst.correspondences.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i)});
      }
      const auto extra = static_cast<std::size_t>(std::llround(spec.magnitude * static_cast<double>(n)));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (std::size_t k = 0; k < extra; ++k) {
        const double x = unit(rng);
        const double y = unit(rng);
        const double z = unit(rng);
        scene.push_back(inst.truth.apply(Point3(x, y, z)));
      }
      break;
    }
    case DegradationKind::Missing: {
      const auto drop = static_cast<std::size_t>(std::llround(spec.magnitude * static_cast<double>(n)));
      std::vector<std::size_t> order(n);
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      for (std::size_t i = 0; i < drop; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(order[i], order[pick(rng)]);
      }
      std::vector<bool> removed(n, false);
      for (std::size_t i = 0; i < drop; ++i) removed[order[i]] = true;
      for (std::size_t i = 0; i < n; ++i) {
        scene.push_back(inst.truth.apply(base[i]));
        if (removed[i]) continue;
        inst.correspondences.push_back({static_cast<std::uint32_t>(model.size()), static_cast<std::uint32_t>(i)});
        model.push_back(base[i]);
      }
      break;
    }
    case DegradationKind::Noise: {
      model.assign(base.begin(), base.end());
      std::normal_distribution<double> noise(0.0, spec.magnitude);
      for (std::size_t i = 0; i < n; ++i) {
        Point3 p = inst.truth.apply(base[i]);
        if (spec.magnitude > 0.0) {
          const double dx = noise(rng);
          const double dy = noise(rng);
          const double dz = noise(rng);
          p += Vector3(dx, dy, dz);
        }
        scene.push_back(p);
        inst.correspondences.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i)});
      }
      break;
    }
  }
  inst.model = PointCloud(std::move(model));
  inst.scene = PointCloud(std::move(scene));
  return inst;
}

double rms_error(const RigidTransform& estimated, std::span<const Correspondence> correspondences,
                 const PointCloud& model, const PointCloud& scene) {
  if (correspondences.empty()) throw Error(ErrorCode::NoCorrespondences, "RMS needs at least one correspondence");
  double sum = 0.0;
  for (const auto& c : correspondences) {
    if (c.model >= model.size() || c.scene >= scene.size()) {
      throw Error(ErrorCode::InvalidArgument, "correspondence index out of range");
    }
    sum += (estimated.apply(model[c.model]) - scene[c.scene]).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(correspondences.size()));
}

std::size_t brute_force_consensus(const PointCloud& model, const PointCloud& scene, const RigidTransform& transform,
                                  double epsilon, Norm norm) {
  std::size_t count = 0;
  for (const auto& m : model) {
    const Point3 p = transform.apply(m);
    for (const auto& s : scene) {
      const double d = norm == Norm::Linf ? dist_linf(p, s) : dist_l2(p, s);
      if (d <= epsilon) {
        ++count;
        break;
      }
    }
  }
  return count;
}

std::vector<double> ExperimentConfig::default_sweep() const {
  switch (profile) {
    case Profile::Clean: return {0.0};
    case Profile::Outliers:
    case Profile::Missing: return {0.0, 0.1, 0.2, 0.3};
    case Profile::Noise: return {0.0025, 0.005, 0.01};
    case Profile::Scalability: return {100, 250, 500, 1000};
  }
  return {};
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) { return mix(mix(master) ^ index); }

ExperimentReport run_experiment(const ExperimentConfig& config, std::span<const NamedCloud> models) {
  const std::vector<double> sweep = config.sweep.empty() ? config.default_sweep() : config.sweep;
  struct Job {
    const NamedCloud* model;
    double value;
    std::size_t rep;
  };
  std::vector<Job> jobs;
  for (const auto& m : models) {
    for (double v : sweep) {
      for (std::size_t r = 0; r < config.repetitions; ++r) jobs.push_back(Job{&m, v, r});
    }
  }

  ExperimentReport report;
  report.trials.resize(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());
  const auto run_one = [&](std::size_t k) {
    const Job& job = jobs[k];
    const std::uint64_t seed = trial_seed(config.seed, k);
    const bool scalability = config.profile == Profile::Scalability;
    const std::size_t points = scalability ? static_cast<std::size_t>(job.value) : config.points;

    DegradationSpec spec;
    spec.kind = kind_for(config.profile);
    spec.magnitude = (scalability || config.profile == Profile::Clean) ? 0.0 : job.value;
    spec.seed = trial_seed(seed, 1);

    RegistrationConfig reg = config.registration;
    const bool noise = config.profile == Profile::Noise;
    reg.epsilon = config.epsilon.value_or(noise ? 0.01 : 0.005);
    reg.tiv_delete = config.tiv_delete.value_or((noise || scalability) ? 0 : 5000);
    reg.tiv_keep = config.tiv_keep.value_or(
        scalability ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.2 * points))) : 200);
    reg.normalize = false;
    if (config.parallel_trials) reg.execution = Execution::Serial;

    const PointCloud base = downsample(job.model->cloud, points, seed);
    const Instance inst = make_instance(base, spec);
    const RegistrationResult res = register_clouds(inst.model, inst.scene, reg);

    TrialRecord& t = report.trials[k];
    t.model = job.model->name;
    t.profile = config.profile;
    t.spec = spec;
    t.trial = job.rep;
    t.model_points = inst.model.size();
    t.scene_points = inst.scene.size();
    t.epsilon = reg.epsilon;
    t.truth_rotation = inst.truth_rotation;
    t.truth = inst.truth;
    t.estimate = res.transform;
    t.estimate_rotation = res.rotation.best_rotation;
    t.angular_error_deg = angular_error(res.transform.rotation, inst.truth.rotation) * 180.0 / kPi;
    t.translation_error = (res.transform.translation - inst.truth.translation).norm();
    t.rms = rms_error(res.transform, inst.correspondences, inst.model, inst.scene);
    t.success = trial_succeeded(t.rms, reg.epsilon);
    t.timings = res.timings;
    t.rotation_count = res.rotation.best_count;
    t.rotation_upper = res.rotation.final_upper_bound;
    t.translation_count = res.translation.best_count;
    t.translation_upper = res.translation.final_upper_bound;
    t.rotation_iterations = res.rotation.iterations;
    t.translation_iterations = res.translation.iterations;
    t.status = (res.rotation.status == SearchStatus::Optimal && res.translation.status == SearchStatus::Optimal)
                   ? SearchStatus::Optimal
                   : SearchStatus::BestEffort;
  };

  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) if (config.parallel_trials)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    try {
      run_one(static_cast<std::size_t>(k));
    } catch (...) {
      failures[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  report.summary = summarize(report.trials);
  return report;
}

std::vector<SummaryRow> summarize(std::span<const TrialRecord> trials) {
  std::vector<std::pair<std::string, double>> keys;
  std::map<std::pair<std::string, double>, std::vector<const TrialRecord*>> groups;
  for (const auto& t : trials) {
    const std::pair<std::string, double> key{t.model, t.profile == Profile::Scalability
                                                          ? static_cast<double>(t.model_points)
                                                          : t.spec.magnitude};
    if (!groups.contains(key)) keys.push_back(key);
    groups[key].push_back(&t);
  }
  std::vector<SummaryRow> rows;
  for (const auto& key : keys) {
    const auto& g = groups[key];
    SummaryRow row;
    row.model = key.first;
    row.magnitude = key.second;
    row.trials = g.size();
    std::vector<double> total, rot, trans, index, tiv, ang, rms;
    for (const auto* t : g) {
      row.successes += t->success ? 1 : 0;
      total.push_back(t->timings.total);
      rot.push_back(t->timings.rotation_search);
      trans.push_back(t->timings.translation_search);
      index.push_back(t->timings.index_total());
      tiv.push_back(t->timings.tiv);
      ang.push_back(t->angular_error_deg);
      rms.push_back(t->rms);
    }
    row.mean_total_seconds = mean(total);
    row.median_total_seconds = median(total);
    row.mean_rotation_seconds = mean(rot);
    row.median_rotation_seconds = median(rot);
    row.mean_translation_seconds = mean(trans);
    row.median_translation_seconds = median(trans);
    row.median_index_seconds = median(index);
    row.median_tiv_seconds = median(tiv);
    row.median_angular_error_deg = median(ang);
    row.max_angular_error_deg = *std::max_element(ang.begin(), ang.end());
    row.median_rms = median(rms);
    row.max_rms = *std::max_element(rms.begin(), rms.end());
    rows.push_back(row);
  }
  return rows;
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_trials_csv(std::ostream& out, std::span<const TrialRecord> trials, bool timings) {
  out << "model,profile,kind,magnitude,trial,seed,model_points,scene_points,epsilon,"
         "truth_rx,truth_ry,truth_rz,truth_tx,truth_ty,truth_tz,"
         "est_rx,est_ry,est_rz,est_tx,est_ty,est_tz,"
         "angular_error_deg,translation_error,rms,success,status,"
         "rotation_count,rotation_upper,translation_count,translation_upper,certificate_gap,"
         "rotation_iterations,translation_iterations";
  if (timings) {
    out << ",tiv_s,rotation_index_s,rotation_search_s,translation_index_s,translation_search_s,total_s";
  }
  out << "\r\n";
  for (const auto& t : trials) {
    out << csv_field(t.model) << ',' << to_string(t.profile) << ',' << to_string(t.spec.kind) << ','
        << num(t.spec.magnitude) << ',' << t.trial << ',' << t.spec.seed << ',' << t.model_points << ','
        << t.scene_points << ',' << num(t.epsilon);
    for (int a = 0; a < 3; ++a) out << ',' << num(t.truth_rotation.value[a]);
    for (int a = 0; a < 3; ++a) out << ',' << num(t.truth.translation[a]);
    for (int a = 0; a < 3; ++a) out << ',' << num(t.estimate_rotation.value[a]);
    for (int a = 0; a < 3; ++a) out << ',' << num(t.estimate.translation[a]);
    out << ',' << num(t.angular_error_deg) << ',' << num(t.translation_error) << ',' << num(t.rms) << ','
        << (t.success ? 1 : 0) << ',' << to_string(t.status) << ',' << t.rotation_count << ',' << t.rotation_upper
        << ',' << t.translation_count << ',' << t.translation_upper << ',' << t.certificate_gap() << ','
        << t.rotation_iterations << ',' << t.translation_iterations;
    if (timings) {
      out << ',' << num(t.timings.tiv) << ',' << num(t.timings.rotation_index) << ','
          << num(t.timings.rotation_search) << ',' << num(t.timings.translation_index) << ','
          << num(t.timings.translation_search) << ',' << num(t.timings.total);
    }
    out << "\r\n";
  }
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows, bool timings) {
  out << "model,magnitude,trials,successes,success_rate,median_angular_error_deg,max_angular_error_deg,"
         "median_rms,max_rms";
  if (timings) {
    out << ",mean_total_s,median_total_s,mean_rotation_s,median_rotation_s,mean_translation_s,"
           "median_translation_s,median_index_s,median_tiv_s";
  }
  out << "\r\n";
  for (const auto& r : rows) {
    out << csv_field(r.model) << ',' << num(r.magnitude) << ',' << r.trials << ',' << r.successes << ','
        << num(r.success_rate()) << ',' << num(r.median_angular_error_deg) << ',' << num(r.max_angular_error_deg)
        << ',' << num(r.median_rms) << ',' << num(r.max_rms);
    if (timings) {
      out << ',' << num(r.mean_total_seconds) << ',' << num(r.median_total_seconds) << ','
          << num(r.mean_rotation_seconds) << ',' << num(r.median_rotation_seconds) << ','
          << num(r.mean_translation_seconds) << ',' << num(r.median_translation_seconds) << ','
          << num(r.median_index_seconds) << ',' << num(r.median_tiv_seconds);
    }
    out << "\r\n";
  }
}

void write_trace_csv(std::ostream& out, std::string_view stage, std::span<const TracePoint> trace, bool timings,
                     bool header) {
  if (header) out << (timings ? "stage,iteration,seconds,upper,lower\r\n" : "stage,iteration,upper,lower\r\n");
  for (const auto& p : trace) {
    out << csv_field(stage) << ',' << p.iteration;
    if (timings) out << ',' << num(p.seconds);
    out << ',' << p.upper << ',' << p.lower << "\r\n";
  }
}

}  // namespace tivreg
