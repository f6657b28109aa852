#pragma once

// Translation-invariant vectors (TIVs): pairwise difference vectors of one
// cloud. Translating the cloud leaves them unchanged and rotating the cloud
// rotates them, so two clouds related by (R, t) yield TIV sets related by R
// alone.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tivreg/geometry.hpp"

namespace tivreg {

struct Tiv {
  Vector3 vector = Vector3::Zero();  // points[to] - points[from]
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  double norm = 0.0;
};

struct TivSet {
  std::vector<Tiv> tivs;  // descending norm
  std::size_t delete_top_k = 0;
  std::size_t keep_top_k = 0;

  std::size_t size() const noexcept { return tivs.size(); }
  bool empty() const noexcept { return tivs.empty(); }
  std::vector<Vector3> vectors() const;
};

/// All N(N-1) ordered-pair differences, from-major then to-minor.
/// Throws Error(TooFewPoints) for fewer than two points.
std::vector<Tiv> construct_all_tivs(const PointCloud& cloud);

/// Sorts by descending norm (ties on (from, to)), drops the first
/// `delete_top_k` and keeps up to `keep_top_k` of the rest.
/// Throws Error(EmptySelection) when nothing is left after deletion.
TivSet select_tivs(std::span<const Tiv> tivs, std::size_t delete_top_k, std::size_t keep_top_k);

/// Every TIV with lo <= norm <= hi, in the same order as select_tivs.
/// delete_top_k records how many were longer than hi.
/// Throws Error(EmptySelection) when none qualifies.
TivSet select_tivs_by_norm(std::span<const Tiv> tivs, double lo, double hi);

}  // namespace tivreg
