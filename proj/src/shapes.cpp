#include "tivreg/shapes.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "tivreg/error.hpp"

namespace tivreg {

namespace {

using Rng = std::mt19937_64;

struct Part {
  double area;
  std::function<Point3(Rng&)> sample;
};

Vector3 unit_sphere(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector3 v;
  do {
    v = Vector3(g(rng), g(rng), g(rng));
  } while (v.norm() < 1e-12);
  return v.normalized();
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Part box(const Vector3& center, const Vector3& half) {
  const double a_xy = 4 * half.x() * half.y();
  const double a_yz = 4 * half.y() * half.z();
  const double a_xz = 4 * half.x() * half.z();
  return Part{2 * (a_xy + a_yz + a_xz), [=](Rng& rng) {
                std::discrete_distribution<int> face({a_xy, a_xy, a_yz, a_yz, a_xz, a_xz});
                const int f = face(rng);
                Vector3 p(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
                const int axis = f < 2 ? 2 : (f < 4 ? 0 : 1);
                p[axis] = (f % 2 == 0) ? -1.0 : 1.0;
                return Point3(center + p.cwiseProduct(half));
              }};
}

Part ellipsoid(const Vector3& center, const Vector3& radii) {
  const double p = 1.6075;
  const double ab = std::pow(radii.x() * radii.y(), p);
  const double ac = std::pow(radii.x() * radii.z(), p);
  const double bc = std::pow(radii.y() * radii.z(), p);
  const double area = 4 * kPi * std::pow((ab + ac + bc) / 3.0, 1.0 / p);
  return Part{area, [=](Rng& rng) { return Point3(center + unit_sphere(rng).cwiseProduct(radii)); }};
}

Part cylinder(const Vector3& a, const Vector3& b, double radius) {
  const Vector3 axis = b - a;
  const Vector3 dir = axis.normalized();
  const Vector3 helper = std::abs(dir.z()) < 0.9 ? Vector3::UnitZ() : Vector3::UnitX();
  const Vector3 n1 = dir.cross(helper).normalized();
  const Vector3 n2 = dir.cross(n1);
  return Part{2 * kPi * radius * axis.norm(), [=](Rng& rng) {
                const double s = uniform(rng, 0, 1);
                const double phi = uniform(rng, 0, 2 * kPi);
                return Point3(a + s * axis + radius * (std::cos(phi) * n1 + std::sin(phi) * n2));
              }};
}

std::vector<Part> blob_parts() {
  std::vector<Part> parts;
  // Lumpy body: sphere with a low-order radial perturbation.
  parts.push_back(Part{4 * kPi * 1.3, [](Rng& rng) {
                         const Vector3 d = unit_sphere(rng);
                         const double r = 1.0 + 0.22 * d.x() * d.y() + 0.15 * std::sin(3 * d.z() + 1.0) + 0.12 * d.x();
                         return Point3(Vector3(1.15, 0.9, 0.85).cwiseProduct(d) * r);
                       }});
  parts.push_back(ellipsoid(Vector3(1.05, 0.35, 0.75), Vector3(0.5, 0.42, 0.45)));    // head
  parts.push_back(ellipsoid(Vector3(1.15, 0.55, 1.45), Vector3(0.12, 0.1, 0.45)));    // long ear
  parts.push_back(ellipsoid(Vector3(0.95, 0.05, 1.3), Vector3(0.1, 0.12, 0.32)));     // short ear
  parts.push_back(ellipsoid(Vector3(-1.1, -0.2, 0.1), Vector3(0.22, 0.2, 0.2)));      // tail
  return parts;
}

std::vector<Part> spiral_parts() {
  // Tube around a conical spiral; the growing radius rules out screw symmetry.
  const auto centerline = [](double u) {
    const double r = 0.3 + 0.25 * u;
    return Vector3(r * std::cos(u), r * std::sin(u), 0.35 * u);
  };
  const double u_max = 3.0 * kPi;
  return {Part{1.0, [=](Rng& rng) {
                 const double u = uniform(rng, 0.0, u_max);
                 const double v = uniform(rng, 0.0, 2 * kPi);
                 const double h = 1e-5;
                 const Vector3 t = (centerline(u + h) - centerline(u - h)).normalized();
                 const Vector3 n = t.cross(Vector3::UnitZ()).normalized();
                 const Vector3 b = t.cross(n);
                 return Point3(centerline(u) + 0.15 * (std::cos(v) * n + std::sin(v) * b));
               }}};
}

std::vector<Part> hand_parts() {
  std::vector<Part> parts;
  parts.push_back(box(Vector3::Zero(), Vector3(0.5, 0.4, 0.12)));                                  // palm
  parts.push_back(cylinder(Vector3(-0.36, 0.4, 0), Vector3(-0.48, 1.2, 0.05), 0.085));             // little
  parts.push_back(cylinder(Vector3(-0.12, 0.4, 0), Vector3(-0.14, 1.38, 0.08), 0.095));            // ring
  parts.push_back(cylinder(Vector3(0.12, 0.4, 0), Vector3(0.16, 1.45, 0.02), 0.095));              // middle
  parts.push_back(cylinder(Vector3(0.36, 0.4, 0), Vector3(0.5, 1.25, -0.06), 0.09));               // index
  parts.push_back(cylinder(Vector3(0.5, -0.1, 0), Vector3(1.0, 0.25, 0.18), 0.11));                // thumb
  parts.push_back(cylinder(Vector3(0.0, -0.4, 0), Vector3(0.05, -0.95, -0.05), 0.28));             // wrist
  return parts;
}

std::vector<Part> bracket_parts() {
  std::vector<Part> parts;
  parts.push_back(box(Vector3(0, 0, 0), Vector3(1.0, 0.6, 0.08)));                  // base plate
  parts.push_back(box(Vector3(-0.92, 0, 0.55), Vector3(0.08, 0.6, 0.55)));          // upright
  parts.push_back(cylinder(Vector3(0.5, 0.2, 0.08), Vector3(0.5, 0.2, 0.6), 0.2));  // boss
  parts.push_back(ellipsoid(Vector3(-0.75, 0.35, 1.15), Vector3(0.16, 0.16, 0.16)));
  parts.push_back(box(Vector3(-0.2, -0.45, 0.3), Vector3(0.5, 0.05, 0.22)));        // rib
  return parts;
}

}  // namespace

const std::vector<std::string>& shape_names() {
  static const std::vector<std::string> names{"blob", "spiral", "hand", "bracket"};
  return names;
}

PointCloud fit_unit_cube(const PointCloud& cloud) {
  const Box3 box = cloud.bounding_box();
  const double extent = box.isEmpty() ? 0.0 : (box.max() - box.min()).maxCoeff();
  if (!(extent > 0.0)) throw Error(ErrorCode::NormalizationDegenerate, "cloud has zero extent");
  std::vector<Point3> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud) out.push_back((p - box.min()) / extent);
  return PointCloud(std::move(out));
}

PointCloud make_shape(std::string_view name, std::size_t n, std::uint64_t seed) {
  std::vector<Part> parts;
  if (name == "blob") {
    parts = blob_parts();
  } else if (name == "spiral") {
    parts = spiral_parts();
  } else if (name == "hand") {
    parts = hand_parts();
  } else if (name == "bracket") {
    parts = bracket_parts();
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown shape '" + std::string(name) + "'");
  }
  std::vector<double> areas;
  for (const auto& p : parts) areas.push_back(p.area);
  std::discrete_distribution<std::size_t> pick(areas.begin(), areas.end());
  Rng rng(seed);
  std::vector<Point3> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(parts[pick(rng)].sample(rng));
  return fit_unit_cube(PointCloud(std::move(pts)));
}

}  // namespace tivreg
