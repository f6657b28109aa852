#include "tivreg/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tivreg/cloud_io.hpp"
#include "tivreg/error.hpp"
#include "tivreg/harness.hpp"
#include "tivreg/kernels.hpp"
#include "tivreg/pipeline.hpp"
#include "tivreg/rotation_search.hpp"
#include "tivreg/shapes.hpp"

namespace tivreg {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Ordered key/value result document, rendered as "key: v1 v2 ..." lines or JSON.
class Document {
 public:
  void put(const std::string& key, double v) { entries_.push_back({key, {Value{v, {}, false}}}); }
  void put(const std::string& key, std::size_t v) { put_int(key, static_cast<long long>(v)); }
  void put(const std::string& key, int v) { put_int(key, v); }
  void put(const std::string& key, const std::string& s) { entries_.push_back({key, {Value{0, s, true}}}); }
  void put(const std::string& key, const Vector3& v) { put(key, std::vector<double>{v.x(), v.y(), v.z()}); }
  void put(const std::string& key, const Matrix3& m) {
    std::vector<double> row_major;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) row_major.push_back(m(r, c));
    }
    put(key, row_major);
  }
  void put(const std::string& key, const std::vector<double>& values) {
    Entry e{key, {}};
    for (double v : values) e.values.push_back(Value{v, {}, false});
    e.array = true;
    entries_.push_back(e);
  }

  void render(std::ostream& out, bool json) const {
    if (!json) {
      for (const auto& e : entries_) {
        out << e.key << ':';
        for (const auto& v : e.values) out << ' ' << text(v);
        out << '\n';
      }
      return;
    }
    ordered_json doc = ordered_json::object();
    for (const auto& e : entries_) {
      if (e.array) {
        ordered_json arr = ordered_json::array();
        for (const auto& v : e.values) arr.push_back(v.value);
        doc[e.key] = arr;
      } else {
        doc[e.key] = scalar(e.values.front());
      }
    }
    out << doc.dump(2) << '\n';
  }

 private:
  struct Value {
    double value;
    std::string str;
    bool is_string;
    bool is_int = false;
    long long integer = 0;
  };
  struct Entry {
    std::string key;
    std::vector<Value> values;
    bool array = false;
  };

  void put_int(const std::string& key, long long v) { entries_.push_back({key, {Value{0, {}, false, true, v}}}); }

  static std::string text(const Value& v) {
    if (v.is_string) return v.str;
    if (v.is_int) return std::to_string(v.integer);
    return num(v.value);
  }
  static ordered_json scalar(const Value& v) {
    if (v.is_string) return v.str;
    if (v.is_int) return v.integer;
    return v.value;
  }

  std::vector<Entry> entries_;
};

std::vector<double> parse_numbers(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "not a finite number: '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

Resolution parse_resolution(const std::string& text) {
  std::string lowered = text;
  for (auto& c : lowered) c = (c == 'X') ? 'x' : c;
  const auto values = parse_numbers(lowered, 'x');
  Resolution r{};
  if (values.size() == 1) {
    r = {static_cast<int>(values[0]), static_cast<int>(values[0]), static_cast<int>(values[0])};
  } else if (values.size() == 3) {
    r = {static_cast<int>(values[0]), static_cast<int>(values[1]), static_cast<int>(values[2])};
  } else {
    throw Error(ErrorCode::InvalidArgument, "--iv-resolution expects N or NxNxN, got '" + text + "'");
  }
  for (int a = 0; a < 3; ++a) {
    if (r[a] < 1 || static_cast<double>(r[a]) != values[values.size() == 1 ? 0 : a]) {
      throw Error(ErrorCode::InvalidArgument, "--iv-resolution needs positive integers, got '" + text + "'");
    }
  }
  return r;
}

std::optional<Box3> parse_trange(const std::string& text) {
  if (text == "auto") return std::nullopt;
  const auto v = parse_numbers(text, ',');
  if (v.size() == 2) return Box3(Vector3::Constant(v[0]), Vector3::Constant(v[1]));
  if (v.size() == 6) return Box3(Vector3(v[0], v[1], v[2]), Vector3(v[3], v[4], v[5]));
  throw Error(ErrorCode::InvalidArgument, "--trange expects 'auto', 'lo,hi' or six values, got '" + text + "'");
}

BoundEvaluation parse_bound(const std::string& text) {
  if (text == "refined") return BoundEvaluation::Refined;
  if (text == "enclosing") return BoundEvaluation::Enclosing;
  throw Error(ErrorCode::InvalidArgument, "--bound expects 'refined' or 'enclosing', got '" + text + "'");
}

// Result documents written by `register` and `synth`; `eval` reads them back.
RigidTransform read_transform(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::map<std::string, std::vector<double>> values;
  std::string line;
  while (std::getline(in, line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    const std::string key = line.substr(0, colon);
    if (key != "rotation_matrix" && key != "translation") continue;
    std::stringstream ss(line.substr(colon + 1));
    std::string tok;
    std::vector<double> v;
    while (ss >> tok) v.push_back(parse_numbers(tok, ',').at(0));
    values[key] = v;
  }
  if (values["rotation_matrix"].size() != 9 || values["translation"].size() != 3) {
    throw Error(ErrorCode::ParseError,
                path.string() + ": needs 'rotation_matrix' (9 values) and 'translation' (3 values)");
  }
  const auto& m = values["rotation_matrix"];
  Matrix3 R;
  R << m[0], m[1], m[2], m[3], m[4], m[5], m[6], m[7], m[8];
  const auto& t = values["translation"];
  return RigidTransform(R, Vector3(t[0], t[1], t[2]));
}

std::vector<Correspondence> read_correspondences(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::vector<Correspondence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == "model,scene") continue;
    const auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("no comma");
      out.push_back({static_cast<std::uint32_t>(std::stoul(line.substr(0, comma))),
                     static_cast<std::uint32_t>(std::stoul(line.substr(comma + 1)))});
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": expected 'model,scene'");
    }
  }
  return out;
}

PointCloud load_base(const std::string& spec, std::uint64_t seed) {
  if (spec.rfind("shape:", 0) == 0) return make_shape(spec.substr(6), 20000, seed);
  return load_cloud(fs::path(spec));
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

void put_transform(Document& doc, const RigidTransform& T) {
  const Eigen::AngleAxisd aa(T.rotation);
  const Vector3 r = aa.axis() * aa.angle();
  doc.put("rotation_angle_axis", r);
  doc.put("rotation_angle_deg", aa.angle() * 180.0 / kPi);
  doc.put("rotation_matrix", T.rotation);
  doc.put("translation", T.translation);
}

struct SearchFlags {
  double epsilon = 0.005;
  std::string resolution = "51";
  std::size_t tiv_delete = 5000;
  std::size_t tiv_keep = 200;
  std::size_t gap = 0;
  std::string trange = "-1,1";
  std::uint64_t seed = 0;
  bool no_normalize = false;
  int max_depth = 25;
  std::string bound = "refined";
  std::string scene_tivs = "norm-window";
  std::string format = "kv";
  std::string trace_csv;
  bool timings = false;
  std::size_t downsample_to = 0;
};

void add_search_flags(CLI::App* cmd, SearchFlags& f) {
  cmd->add_option("--epsilon", f.epsilon, "Inlier threshold (L-infinity)")->check(CLI::PositiveNumber);
  cmd->add_option("--iv-resolution", f.resolution, "Integral volume grid, N or NxNxN");
  cmd->add_option("--tiv-delete", f.tiv_delete, "Longest TIVs to drop");
  cmd->add_option("--tiv-keep", f.tiv_keep, "TIVs to keep after deletion");
  cmd->add_option("--gap", f.gap, "BnB termination gap in consensus units");
  cmd->add_option("--trange", f.trange, "Translation range: auto | lo,hi | x0,y0,z0,x1,y1,z1");
  cmd->add_option("--seed", f.seed, "Seed for downsampling");
  cmd->add_flag("--no-normalize", f.no_normalize, "Register in input units");
  cmd->add_option("--max-depth", f.max_depth, "Largest subdivision depth")->check(CLI::Range(1, 60));
  cmd->add_option("--bound", f.bound, "refined | enclosing");
  cmd->add_option("--scene-tivs", f.scene_tivs, "Scene TIV selection: norm-window | rank");
  cmd->add_option("--format", f.format, "Result document format")->check(CLI::IsMember({"kv", "json"}));
  cmd->add_option("--trace-csv", f.trace_csv, "Write the bound evolution to this CSV");
  cmd->add_flag("--timings", f.timings, "Include wall-clock timings (output no longer reproducible)");
  cmd->add_option("--downsample", f.downsample_to, "Randomly keep this many points of each input");
}

RegistrationConfig registration_config(const SearchFlags& f) {
  RegistrationConfig c;
  c.epsilon = f.epsilon;
  c.iv_resolution = parse_resolution(f.resolution);
  c.tiv_delete = f.tiv_delete;
  c.tiv_keep = f.tiv_keep;
  c.gap_r = f.gap;
  c.gap_t = f.gap;
  c.translation_range = parse_trange(f.trange);
  c.normalize = !f.no_normalize;
  c.rng_seed = f.seed;
  c.max_depth = f.max_depth;
  c.bound = parse_bound(f.bound);
  c.scene_tivs = parse_scene_tiv_selection(f.scene_tivs);
  c.validate();
  return c;
}

PointCloud load_input(const std::string& path, const SearchFlags& f, std::uint64_t salt) {
  PointCloud cloud = load_cloud(fs::path(path));
  if (f.downsample_to > 0) cloud = downsample(cloud, f.downsample_to, trial_seed(f.seed, salt));
  return cloud;
}

int run_register(const std::string& model_path, const std::string& scene_path, const SearchFlags& f,
                 std::ostream& out) {
  const RegistrationConfig config = registration_config(f);
  const PointCloud model = load_input(model_path, f, 0);
  const PointCloud scene = load_input(scene_path, f, 1);
  const RegistrationResult res = register_clouds(model, scene, config);

  const bool optimal = res.rotation.status == SearchStatus::Optimal &&
                       res.translation.status == SearchStatus::Optimal;
  Document doc;
  doc.put("status", std::string(optimal ? "optimal" : "best_effort"));
  doc.put("model_points", model.size());
  doc.put("scene_points", scene.size());
  doc.put("epsilon", config.epsilon);
  put_transform(doc, res.transform);
  doc.put("rotation_consensus", res.rotation.best_count);
  doc.put("rotation_upper_bound", res.rotation.final_upper_bound);
  doc.put("rotation_certificate_gap", res.rotation.certificate_gap());
  doc.put("rotation_iterations", res.rotation.iterations);
  doc.put("translation_consensus", res.translation.best_count);
  doc.put("translation_upper_bound", res.translation.final_upper_bound);
  doc.put("translation_certificate_gap", res.translation.certificate_gap());
  doc.put("translation_iterations", res.translation.iterations);
  doc.put("model_tivs", res.model_tivs);
  doc.put("scene_tivs", res.scene_tivs);
  doc.put("normalization_offset", res.normalization.offset);
  doc.put("normalization_scale", res.normalization.scale);
  doc.put("translation_range_min", Vector3(res.translation_range.min()));
  doc.put("translation_range_max", Vector3(res.translation_range.max()));
  if (f.timings) {
    const auto& t = res.timings;
    doc.put("time_normalize_s", t.normalize);
    doc.put("time_tiv_s", t.tiv);
    doc.put("time_rotation_index_s", t.rotation_index);
    doc.put("time_rotation_search_s", t.rotation_search);
    doc.put("time_translation_index_s", t.translation_index);
    doc.put("time_translation_search_s", t.translation_search);
    doc.put("time_total_s", t.total);
  }
  doc.render(out, f.format == "json");

  if (!f.trace_csv.empty()) {
    std::ostringstream csv;
    write_trace_csv(csv, "rotation", res.rotation.bound_trace, f.timings, true);
    write_trace_csv(csv, "translation", res.translation.bound_trace, f.timings, false);
    write_text_file(f.trace_csv, csv.str());
  }
  return 0;
}

int run_rotsearch(const std::string& model_path, const std::string& scene_path, const SearchFlags& f,
                  std::ostream& out) {
  const Resolution res = parse_resolution(f.resolution);
  const PointCloud model = load_input(model_path, f, 0);
  const PointCloud scene = load_input(scene_path, f, 1);
  if (model.empty() || scene.empty()) throw Error(ErrorCode::EmptyInput, "rotsearch needs non-empty inputs");
  const std::vector<Vector3> moving(model.begin(), model.end());
  const std::vector<Vector3> fixed(scene.begin(), scene.end());
  SearchConfig sc;
  sc.gap = f.gap;
  sc.max_depth = f.max_depth;
  sc.bound = parse_bound(f.bound);
  const auto t0 = std::chrono::steady_clock::now();
  const VolumeIndex index = build_rotation_index(fixed, f.epsilon, res);
  const auto t1 = std::chrono::steady_clock::now();
  const RotationSearchResult r = bnb_rotation_search(moving, index, f.epsilon, sc);
  const auto t2 = std::chrono::steady_clock::now();

  Document doc;
  doc.put("status", std::string(to_string(r.status)));
  doc.put("moving_vectors", moving.size());
  doc.put("scene_vectors", fixed.size());
  doc.put("epsilon", f.epsilon);
  put_transform(doc, RigidTransform(r.best_matrix, Vector3::Zero()));
  doc.put("rotation_consensus", r.best_count);
  doc.put("rotation_upper_bound", r.final_upper_bound);
  doc.put("rotation_certificate_gap", r.certificate_gap());
  doc.put("rotation_iterations", r.iterations);
  if (f.timings) {
    doc.put("time_rotation_index_s", std::chrono::duration<double>(t1 - t0).count());
    doc.put("time_rotation_search_s", std::chrono::duration<double>(t2 - t1).count());
  }
  doc.render(out, f.format == "json");
  if (!f.trace_csv.empty()) {
    std::ostringstream csv;
    write_trace_csv(csv, "rotation", r.bound_trace, f.timings, true);
    write_text_file(f.trace_csv, csv.str());
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Globally optimal rigid point-set registration", "tivreg"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  SearchFlags reg_flags;
  std::string reg_model, reg_scene;
  auto* reg = app.add_subcommand("register", "Register <model> onto <scene> and print the result document");
  reg->add_option("model", reg_model, "Model cloud (.ply/.xyz)")->required();
  reg->add_option("scene", reg_scene, "Scene cloud (.ply/.xyz)")->required();
  add_search_flags(reg, reg_flags);

  SearchFlags rot_flags;
  std::string rot_model, rot_scene;
  auto* rot = app.add_subcommand("rotsearch", "Rotation search on two clouds read as vector sets");
  rot->add_option("model", rot_model, "Moving vectors")->required();
  rot->add_option("scene", rot_scene, "Scene vectors")->required();
  add_search_flags(rot, rot_flags);

  std::string synth_base, synth_kind = "outliers", synth_out = ".";
  double synth_magnitude = 0.0;
  std::uint64_t synth_seed = 0;
  std::size_t synth_points = 500;
  auto* synth = app.add_subcommand("synth", "Write a degraded instance: model.xyz, scene.xyz, truth.txt, correspondences.csv");
  synth->add_option("base", synth_base, "Base cloud file or shape:NAME")->required();
  synth->add_option("--kind", synth_kind, "outliers | missing | noise");
  synth->add_option("--magnitude", synth_magnitude, "Fraction, or noise sigma");
  synth->add_option("--seed", synth_seed, "Instance seed");
  synth->add_option("--points", synth_points, "Downsample the base to this many points")->check(CLI::PositiveNumber);
  synth->add_option("--out-dir", synth_out, "Output directory");

  std::string eval_truth, eval_estimate, eval_model, eval_scene, eval_corr, eval_format = "kv";
  auto* eval = app.add_subcommand("eval", "Compare an estimated transform with the ground truth");
  eval->add_option("truth", eval_truth, "Document with rotation_matrix and translation")->required();
  eval->add_option("estimate", eval_estimate, "Document with rotation_matrix and translation")->required();
  eval->add_option("--model", eval_model, "Model cloud, for RMS");
  eval->add_option("--scene", eval_scene, "Scene cloud, for RMS");
  eval->add_option("--correspondences", eval_corr, "CSV of model,scene index pairs, for RMS");
  eval->add_option("--format", eval_format, "kv | json")->check(CLI::IsMember({"kv", "json"}));

  std::string exp_profile = "clean", exp_out = ".";
  std::vector<std::string> exp_shapes;
  std::vector<std::string> exp_models;
  std::vector<double> exp_sweep;
  ExperimentConfig exp_config;
  std::optional<double> exp_eps;
  std::optional<std::size_t> exp_del, exp_keep;
  bool exp_timings = false;
  auto* exp = app.add_subcommand("experiment", "Repeated synthetic trials; writes trials.csv and summary.csv");
  exp->add_option("--profile", exp_profile, "clean | outliers | missing | noise | scalability");
  exp->add_option("--shapes", exp_shapes, "Built-in shapes")->delimiter(',');
  exp->add_option("--model", exp_models, "Model files, scaled into the unit cube");
  exp->add_option("--sweep", exp_sweep, "Magnitudes (point counts for scalability)")->delimiter(',');
  exp->add_option("--reps", exp_config.repetitions, "Repetitions per setting");
  exp->add_option("--points", exp_config.points, "Points per model")->check(CLI::PositiveNumber);
  exp->add_option("--seed", exp_config.seed, "Master seed");
  exp->add_option("--epsilon", exp_eps, "Override the profile's threshold");
  exp->add_option("--tiv-delete", exp_del, "Override the profile's TIV deletion");
  exp->add_option("--tiv-keep", exp_keep, "Override the profile's TIV count");
  exp->add_flag("--parallel-trials", exp_config.parallel_trials, "Run trials concurrently");
  exp->add_flag("--timings", exp_timings, "Include timing columns");
  exp->add_option("--out-dir", exp_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "tivreg: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    configure_threads_from_env();
    if (*reg) return run_register(reg_model, reg_scene, reg_flags, out);
    if (*rot) return run_rotsearch(rot_model, rot_scene, rot_flags, out);
    if (*synth) {
      DegradationSpec spec{parse_degradation_kind(synth_kind), synth_magnitude, synth_seed};
      spec.validate();
      const PointCloud base = downsample(load_base(synth_base, synth_seed), synth_points, trial_seed(synth_seed, 0));
      const Instance inst = make_instance(base, spec);
      const fs::path dir(synth_out);
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
      save_cloud(dir / "model.xyz", inst.model, CloudFormat::Xyz);
      save_cloud(dir / "scene.xyz", inst.scene, CloudFormat::Xyz);
      std::ostringstream truth;
      Document doc;
      doc.put("kind", std::string(to_string(spec.kind)));
      doc.put("magnitude", spec.magnitude);
      doc.put("seed", static_cast<std::size_t>(spec.seed));
      put_transform(doc, inst.truth);
      doc.render(truth, false);
      write_text_file(dir / "truth.txt", truth.str());
      std::ostringstream corr;
      corr << "model,scene\n";
      for (const auto& c : inst.correspondences) corr << c.model << ',' << c.scene << '\n';
      write_text_file(dir / "correspondences.csv", corr.str());
      out << "wrote " << (dir / "model.xyz").string() << " (" << inst.model.size() << " points), "
          << (dir / "scene.xyz").string() << " (" << inst.scene.size() << " points)\n";
      return 0;
    }
    if (*eval) {
      const RigidTransform truth = read_transform(eval_truth);
      const RigidTransform estimate = read_transform(eval_estimate);
      Document doc;
      doc.put("angular_error_deg", angular_error(estimate.rotation, truth.rotation) * 180.0 / kPi);
      doc.put("translation_error", (estimate.translation - truth.translation).norm());
      const bool want_rms = !eval_model.empty() || !eval_scene.empty() || !eval_corr.empty();
      if (want_rms) {
        if (eval_model.empty() || eval_scene.empty() || eval_corr.empty()) {
          throw Error(ErrorCode::InvalidArgument, "RMS needs --model, --scene and --correspondences together");
        }
        const auto corr = read_correspondences(eval_corr);
        doc.put("rms", rms_error(estimate, corr, load_cloud(fs::path(eval_model)), load_cloud(fs::path(eval_scene))));
      }
      doc.render(out, eval_format == "json");
      return 0;
    }
    if (*exp) {
      exp_config.profile = parse_profile(exp_profile);
      exp_config.sweep = exp_sweep;
      exp_config.epsilon = exp_eps;
      exp_config.tiv_delete = exp_del;
      exp_config.tiv_keep = exp_keep;
      std::vector<NamedCloud> models;
      if (exp_shapes.empty() && exp_models.empty()) exp_shapes = shape_names();
      for (const auto& s : exp_shapes) models.push_back({s, make_shape(s, 20000, 0)});
      for (const auto& m : exp_models) models.push_back({fs::path(m).stem().string(), fit_unit_cube(load_cloud(fs::path(m)))});
      const ExperimentReport report = run_experiment(exp_config, models);
      const fs::path dir(exp_out);
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
      std::ostringstream trials, summary;
      write_trials_csv(trials, report.trials, exp_timings);
      write_summary_csv(summary, report.summary, exp_timings);
      write_text_file(dir / "trials.csv", trials.str());
      write_text_file(dir / "summary.csv", summary.str());
      for (const auto& row : report.summary) {
        out << row.model << " magnitude " << row.magnitude << ": " << row.successes << "/" << row.trials
            << " succeeded\n";
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "tivreg: " << to_string(e.code()) << ": " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::Io:
      case ErrorCode::ParseError:
      case ErrorCode::UnsupportedFormat:
      case ErrorCode::InvalidArgument:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    err << "tivreg: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace tivreg
