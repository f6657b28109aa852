#include "tivreg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tivreg/error.hpp"

namespace tivreg {

PointCloud::PointCloud(std::vector<Point3> points) : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!points_[i].allFinite()) {
      throw Error(ErrorCode::NonFinite, "point " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
}

Box3 PointCloud::bounding_box() const {
  Box3 box;  // default-constructed AlignedBox is empty
  for (const auto& p : points_) box.extend(p);
  return box;
}

Matrix3 rodrigues(const RotationVector& r) {
  const double theta = r.value.norm();
  if (theta < kSmallAngle) return Matrix3::Identity();
  const Vector3 k = r.value / theta;
  Matrix3 skew;
  skew << 0.0, -k.z(), k.y(),
          k.z(), 0.0, -k.x(),
          -k.y(), k.x(), 0.0;
  return Matrix3::Identity() + std::sin(theta) * skew + (1.0 - std::cos(theta)) * (skew * skew);
}

bool is_rotation(const Matrix3& r, double tolerance) {
  if (!r.allFinite()) return false;
  const double ortho = (r.transpose() * r - Matrix3::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tolerance && std::abs(r.determinant() - 1.0) <= tolerance;
}

PointCloud apply(const RigidTransform& t, const PointCloud& cloud) {
  std::vector<Point3> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud) out.push_back(t.apply(p));
  return PointCloud(std::move(out));
}

double angular_error(const Matrix3& estimated, const Matrix3& truth) {
  const double c = ((estimated.transpose() * truth).trace() - 1.0) / 2.0;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace tivreg
