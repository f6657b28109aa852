#include "tivreg/tiv.hpp"

#include <algorithm>
#include <string>

#include "tivreg/error.hpp"

namespace tivreg {

std::vector<Vector3> TivSet::vectors() const {
  std::vector<Vector3> out;
  out.reserve(tivs.size());
  for (const auto& t : tivs) out.push_back(t.vector);
  return out;
}

std::vector<Tiv> construct_all_tivs(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  if (n < 2) {
    throw Error(ErrorCode::TooFewPoints,
                "TIV construction needs at least 2 points, got " + std::to_string(n));
  }
  std::vector<Tiv> out(n * (n - 1));
  const auto pts = cloud.points();
  const auto count = static_cast<std::ptrdiff_t>(n);
  // Each row writes a disjoint slice, so the layout is independent of scheduling.
#pragma omp parallel for schedule(static) if (n >= 256)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    std::size_t slot = static_cast<std::size_t>(i) * (n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == static_cast<std::size_t>(i)) continue;
      Tiv& t = out[slot++];
      t.vector = pts[j] - pts[static_cast<std::size_t>(i)];
      t.from = static_cast<std::uint32_t>(i);
      t.to = static_cast<std::uint32_t>(j);
      t.norm = t.vector.norm();
    }
  }
  return out;
}

namespace {

bool longer_first(const Tiv& a, const Tiv& b) {
  if (a.norm != b.norm) return a.norm > b.norm;
  if (a.from != b.from) return a.from < b.from;
  return a.to < b.to;
}

}  // namespace

TivSet select_tivs(std::span<const Tiv> tivs, std::size_t delete_top_k, std::size_t keep_top_k) {
  if (keep_top_k < 1) throw Error(ErrorCode::InvalidArgument, "keep_top_k must be at least 1");
  if (delete_top_k >= tivs.size()) {
    throw Error(ErrorCode::EmptySelection, "deleting " + std::to_string(delete_top_k) + " of " +
                                               std::to_string(tivs.size()) + " TIVs leaves nothing to select");
  }
  std::vector<Tiv> sorted(tivs.begin(), tivs.end());
  std::sort(sorted.begin(), sorted.end(), longer_first);
  const std::size_t last = std::min(sorted.size(), delete_top_k + keep_top_k);
  TivSet set;
  set.tivs.assign(sorted.begin() + static_cast<std::ptrdiff_t>(delete_top_k),
                  sorted.begin() + static_cast<std::ptrdiff_t>(last));
  set.delete_top_k = delete_top_k;
  set.keep_top_k = keep_top_k;
  return set;
}

TivSet select_tivs_by_norm(std::span<const Tiv> tivs, double lo, double hi) {
  TivSet set;
  for (const auto& t : tivs) {
    if (t.norm > hi) {
      ++set.delete_top_k;
    } else if (t.norm >= lo) {
      set.tivs.push_back(t);
    }
  }
  if (set.tivs.empty()) throw Error(ErrorCode::EmptySelection, "no TIV has a norm in the requested window");
  std::sort(set.tivs.begin(), set.tivs.end(), longer_first);
  set.keep_top_k = set.tivs.size();
  return set;
}

}  // namespace tivreg
