#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "tivreg/geometry.hpp"

namespace tivreg {

enum class CloudFormat { Auto, PlyAscii, Xyz };

struct CloudFile {
  std::filesystem::path path;
  CloudFormat format = CloudFormat::Auto;
  std::optional<std::string> unit_hint;
};

/// Extension first (.ply, .xyz/.txt/.pts), then the "ply" magic line.
/// Throws Error(Io) if the file cannot be opened.
CloudFormat detect_format(const std::filesystem::path& path);

/// Throws Error(Io), Error(ParseError) with a line number, or
/// Error(UnsupportedFormat) for binary PLY.
PointCloud load_cloud(const CloudFile& file);
inline PointCloud load_cloud(const std::filesystem::path& path) { return load_cloud(CloudFile{path, CloudFormat::Auto, std::nullopt}); }

/// `source` names the stream in error messages.
PointCloud parse_xyz(std::istream& in, std::string_view source = "<stream>");
PointCloud parse_ply(std::istream& in, std::string_view source = "<stream>");

/// One "x y z" line per point at 17 significant digits (exact round trip).
void write_xyz(std::ostream& out, const PointCloud& cloud);
void write_ply_ascii(std::ostream& out, const PointCloud& cloud);
void save_cloud(const std::filesystem::path& path, const PointCloud& cloud, CloudFormat format = CloudFormat::Auto);

/// Uniform sample of n points without replacement, in original order.
/// Returns the whole cloud when n >= size.
PointCloud downsample(const PointCloud& cloud, std::size_t n, std::uint64_t seed);

}  // namespace tivreg
