#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_set>

namespace oracle {

std::size_t box_count(std::span<const Point3> points, const Box3& box) {
  std::size_t n = 0;
  for (const auto& p : points) {
    bool inside = true;
    for (int a = 0; a < 3; ++a) inside = inside && p[a] >= box.min()[a] && p[a] <= box.max()[a];
    n += inside ? 1 : 0;
  }
  return n;
}

bool exists_linf(std::span<const Point3> points, const Point3& center, double epsilon) {
  for (const auto& p : points) {
    if (std::abs(p.x() - center.x()) <= epsilon && std::abs(p.y() - center.y()) <= epsilon &&
        std::abs(p.z() - center.z()) <= epsilon) {
      return true;
    }
  }
  return false;
}

std::size_t consensus(std::span<const Vector3> moving, std::span<const Vector3> scene, const Matrix3& rotation,
                      double epsilon) {
  std::size_t n = 0;
  for (const auto& m : moving) n += exists_linf(scene, rotation * m, epsilon) ? 1 : 0;
  return n;
}

std::size_t translation_consensus(std::span<const Point3> model, std::span<const Point3> scene, const Vector3& t,
                                  double epsilon) {
  std::size_t n = 0;
  for (const auto& p : model) n += exists_linf(scene, p + t, epsilon) ? 1 : 0;
  return n;
}

Matrix3 rotation_of(const Vector3& angle_axis) {
  const double angle = angle_axis.norm();
  if (angle == 0.0) return Matrix3::Identity();
  return Eigen::Quaterniond(Eigen::AngleAxisd(angle, angle_axis / angle)).toRotationMatrix();
}

double quaternion_angle(const Matrix3& a, const Matrix3& b) {
  const Eigen::Quaterniond qa(a);
  const Eigen::Quaterniond qb(b);
  const Eigen::Quaterniond d = qa.conjugate() * qb;
  return 2.0 * std::atan2(d.vec().norm(), std::abs(d.w()));
}

std::size_t rotation_grid_search(std::span<const Vector3> moving, std::span<const Vector3> scene, double epsilon,
                                 double step) {
  const double slack = std::sqrt(3.0) * epsilon;
  std::vector<std::vector<Vector3>> candidates(moving.size());
  for (std::size_t i = 0; i < moving.size(); ++i) {
    for (const auto& s : scene) {
      if (std::abs(s.norm() - moving[i].norm()) <= slack) candidates[i].push_back(s);
    }
  }
  std::size_t reachable = 0;
  for (const auto& c : candidates) reachable += c.empty() ? 0 : 1;
  const int n = static_cast<int>(std::floor(tivreg::kPi / step));
  std::size_t best = 0;
#pragma omp parallel for schedule(dynamic) reduction(max : best)
  for (int ix = -n; ix <= n; ++ix) {
    for (int iy = -n; iy <= n; ++iy) {
      for (int iz = -n; iz <= n; ++iz) {
        const Vector3 r(ix * step, iy * step, iz * step);
        if (r.norm() > tivreg::kPi) continue;
        const Matrix3 R = rotation_of(r);
        // Stop once the remaining vectors cannot lift the count above best.
        std::size_t count = 0;
        std::size_t left = reachable;
        for (std::size_t i = 0; i < moving.size() && count + left > best; ++i) {
          if (candidates[i].empty()) continue;
          --left;
          count += exists_linf(candidates[i], R * moving[i], epsilon) ? 1 : 0;
        }
        best = std::max(best, count);
      }
    }
  }
  return best;
}

std::size_t translation_grid_search(std::span<const Point3> model, std::span<const Point3> scene, double epsilon,
                                    double step, const Box3& range) {
  struct KeyHash {
    std::size_t operator()(const std::array<long, 3>& k) const {
      return static_cast<std::size_t>(k[0] * 73856093L ^ k[1] * 19349663L ^ k[2] * 83492791L);
    }
  };
  std::unordered_set<std::array<long, 3>, KeyHash> lattice;
  for (const auto& p : model) {
    for (const auto& s : scene) {
      const Vector3 d = s - p;
      std::array<long, 3> lo{}, hi{};
      for (int a = 0; a < 3; ++a) {
        lo[a] = static_cast<long>(std::ceil((std::max(d[a] - epsilon, range.min()[a])) / step));
        hi[a] = static_cast<long>(std::floor((std::min(d[a] + epsilon, range.max()[a])) / step));
      }
      for (long i = lo[0]; i <= hi[0]; ++i) {
        for (long j = lo[1]; j <= hi[1]; ++j) {
          for (long k = lo[2]; k <= hi[2]; ++k) lattice.insert({i, j, k});
        }
      }
    }
  }
  std::size_t best = 0;
  for (const auto& k : lattice) {
    const Vector3 t(k[0] * step, k[1] * step, k[2] * step);
    best = std::max(best, translation_consensus(model, scene, t, epsilon));
  }
  return best;
}

std::size_t translation_exact_max(std::span<const Point3> model, std::span<const Point3> scene, double epsilon,
                                  const Box3& range) {
  struct Box {
    Vector3 lo, hi;
    std::size_t point;
  };
  std::vector<Box> boxes;
  for (std::size_t i = 0; i < model.size(); ++i) {
    for (const auto& s : scene) {
      const Vector3 d = s - model[i];
      const Vector3 lo = (d - Vector3::Constant(epsilon)).cwiseMax(range.min());
      const Vector3 hi = (d + Vector3::Constant(epsilon)).cwiseMin(range.max());
      if ((lo.array() <= hi.array()).all()) boxes.push_back({lo, hi, i});
    }
  }
  std::size_t best = 0;
  std::vector<std::size_t> seen(model.size(), 0);
  std::size_t stamp = 0;
  for (const auto& bx : boxes) {
    const double x = bx.lo.x();
    std::vector<const Box*> in_x;
    for (const auto& b : boxes) {
      if (b.lo.x() <= x && x <= b.hi.x()) in_x.push_back(&b);
    }
    for (const Box* by : in_x) {
      const double y = by->lo.y();
      std::vector<const Box*> in_xy;
      for (const Box* b : in_x) {
        if (b->lo.y() <= y && y <= b->hi.y()) in_xy.push_back(b);
      }
      for (const Box* bz : in_xy) {
        const double z = bz->lo.z();
        ++stamp;
        std::size_t count = 0;
        for (const Box* b : in_xy) {
          if (b->lo.z() <= z && z <= b->hi.z() && seen[b->point] != stamp) {
            seen[b->point] = stamp;
            ++count;
          }
        }
        best = std::max(best, count);
      }
    }
  }
  return best;
}

Vector3 sample_in_cube(std::uint64_t& state, const Vector3& center, double half_side) {
  Vector3 out;
  for (int a = 0; a < 3; ++a) {
    // xorshift64*
    state ^= state >> 12;
    state ^= state << 25;
    state ^= state >> 27;
    const std::uint64_t bits = state * 2685821657736338717ULL;
    const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
    out[a] = center[a] + half_side * (2.0 * u - 1.0);
  }
  return out;
}

}  // namespace oracle
