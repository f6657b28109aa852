#include "tivreg/cloud_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "tivreg/error.hpp"

namespace tivreg {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

[[noreturn]] void parse_fail(std::string_view source, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, std::string(source) + ":" + std::to_string(line) + ": " + what);
}

double parse_coordinate(std::string_view token, std::string_view source, std::size_t line) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) parse_fail(source, line, "not a number: '" + std::string(token) + "'");
  if (!std::isfinite(value)) parse_fail(source, line, "non-finite coordinate '" + std::string(token) + "'");
  return value;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string lowercase_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

}  // namespace

CloudFormat detect_format(const std::filesystem::path& path) {
  const std::string ext = lowercase_extension(path);
  if (ext == ".ply") return CloudFormat::PlyAscii;
  if (ext == ".xyz" || ext == ".txt" || ext == ".pts") return CloudFormat::Xyz;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::string first;
  std::getline(in, first);
  if (!first.empty() && first.back() == '\r') first.pop_back();
  return first == "ply" ? CloudFormat::PlyAscii : CloudFormat::Xyz;
}

PointCloud parse_xyz(std::istream& in, std::string_view source) {
  std::vector<Point3> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    const auto tokens = split_ws(view);
    if (tokens.empty()) continue;
    if (tokens.size() < 3) parse_fail(source, line_no, "expected 3 coordinates, got " + std::to_string(tokens.size()));
    points.emplace_back(parse_coordinate(tokens[0], source, line_no), parse_coordinate(tokens[1], source, line_no),
                        parse_coordinate(tokens[2], source, line_no));
  }
  return PointCloud(std::move(points));
}

PointCloud parse_ply(std::istream& in, std::string_view source) {
  struct Property {
    std::string name;
    bool is_list = false;
  };
  struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<Property> properties;
  };

  std::string line;
  std::size_t line_no = 0;
  const auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line() || line != "ply") parse_fail(source, 1, "missing 'ply' magic line");
  std::vector<Element> elements;
  bool saw_format = false;
  while (true) {
    if (!next_line()) parse_fail(source, line_no, "header ends before 'end_header'");
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    const std::string_view key = tokens[0];
    if (key == "end_header") break;
    if (key == "comment" || key == "obj_info") continue;
    if (key == "format") {
      if (tokens.size() < 2) parse_fail(source, line_no, "malformed format line");
      if (tokens[1] != "ascii") {
        throw Error(ErrorCode::UnsupportedFormat, std::string(source) + ": PLY format '" + std::string(tokens[1]) +
                                                      "' is not supported; only ascii PLY can be read");
      }
      saw_format = true;
    } else if (key == "element") {
      if (tokens.size() != 3) parse_fail(source, line_no, "malformed element line");
      Element e;
      e.name = std::string(tokens[1]);
      std::size_t count = 0;
      const auto [ptr, ec] = std::from_chars(tokens[2].data(), tokens[2].data() + tokens[2].size(), count);
      if (ec != std::errc() || ptr != tokens[2].data() + tokens[2].size()) {
        parse_fail(source, line_no, "bad element count '" + std::string(tokens[2]) + "'");
      }
      e.count = count;
      elements.push_back(std::move(e));
    } else if (key == "property") {
      if (elements.empty()) parse_fail(source, line_no, "property before any element");
      if (tokens.size() >= 5 && tokens[1] == "list") {
        elements.back().properties.push_back(Property{std::string(tokens[4]), true});
      } else if (tokens.size() == 3) {
        elements.back().properties.push_back(Property{std::string(tokens[2]), false});
      } else {
        parse_fail(source, line_no, "malformed property line");
      }
    } else {
      parse_fail(source, line_no, "unknown header keyword '" + std::string(key) + "'");
    }
  }
  if (!saw_format) parse_fail(source, line_no, "header has no format line");

  std::vector<Point3> points;
  bool found_vertex = false;
  for (const auto& e : elements) {
    const bool is_vertex = e.name == "vertex";
    std::array<int, 3> slot{-1, -1, -1};
    if (is_vertex) {
      found_vertex = true;
      for (std::size_t p = 0; p < e.properties.size(); ++p) {
        const auto& name = e.properties[p].name;
        if (e.properties[p].is_list) continue;
        if (name == "x") slot[0] = static_cast<int>(p);
        if (name == "y") slot[1] = static_cast<int>(p);
        if (name == "z") slot[2] = static_cast<int>(p);
      }
      if (slot[0] < 0 || slot[1] < 0 || slot[2] < 0) {
        parse_fail(source, line_no, "vertex element lacks x/y/z properties");
      }
      points.reserve(e.count);
    }
    for (std::size_t r = 0; r < e.count; ++r) {
      if (!next_line()) parse_fail(source, line_no, "unexpected end of file in element '" + e.name + "'");
      if (!is_vertex) continue;
      const auto tokens = split_ws(line);
      // Walk the properties so list-valued ones consume the right token count.
      std::array<double, 3> xyz{};
      std::size_t t = 0;
      for (std::size_t p = 0; p < e.properties.size(); ++p) {
        if (t >= tokens.size()) parse_fail(source, line_no, "too few values in vertex row");
        if (e.properties[p].is_list) {
          std::size_t n = 0;
          std::from_chars(tokens[t].data(), tokens[t].data() + tokens[t].size(), n);
          t += 1 + n;
          continue;
        }
        for (int a = 0; a < 3; ++a) {
          if (slot[a] == static_cast<int>(p)) xyz[a] = parse_coordinate(tokens[t], source, line_no);
        }
        ++t;
      }
      points.emplace_back(xyz[0], xyz[1], xyz[2]);
    }
  }
  if (!found_vertex) parse_fail(source, line_no, "no vertex element");
  return PointCloud(std::move(points));
}

PointCloud load_cloud(const CloudFile& file) {
  const CloudFormat format = file.format == CloudFormat::Auto ? detect_format(file.path) : file.format;
  std::ifstream in(file.path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + file.path.string() + "'");
  const std::string name = file.path.string();
  return format == CloudFormat::PlyAscii ? parse_ply(in, name) : parse_xyz(in, name);
}

void write_xyz(std::ostream& out, const PointCloud& cloud) {
  for (const auto& p : cloud) {
    out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
  }
}

void write_ply_ascii(std::ostream& out, const PointCloud& cloud) {
  out << "ply\nformat ascii 1.0\nelement vertex " << cloud.size()
      << "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
  write_xyz(out, cloud);
}

void save_cloud(const std::filesystem::path& path, const PointCloud& cloud, CloudFormat format) {
  if (format == CloudFormat::Auto) {
    format = lowercase_extension(path) == ".ply" ? CloudFormat::PlyAscii : CloudFormat::Xyz;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  if (format == CloudFormat::PlyAscii) {
    write_ply_ascii(out, cloud);
  } else {
    write_xyz(out, cloud);
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

PointCloud downsample(const PointCloud& cloud, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "downsample size must be at least 1");
  if (n >= cloud.size()) return cloud;
  std::vector<std::size_t> idx(cloud.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  std::vector<Point3> out;
  out.reserve(n);
  for (std::size_t i : idx) out.push_back(cloud[i]);
  return PointCloud(std::move(out));
}

}  // namespace tivreg
