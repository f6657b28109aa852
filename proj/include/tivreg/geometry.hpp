#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace tivreg {

using Vector3 = Eigen::Vector3d;
using Point3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;
using Box3 = Eigen::AlignedBox3d;

inline constexpr double kPi = 3.14159265358979323846;

// Orthonormality tolerance for rotation matrices.
inline constexpr double kRotationTolerance = 1e-9;

// Below this angle a rotation vector is treated as the identity.
inline constexpr double kSmallAngle = 1e-12;

/// Ordered, immutable list of finite 3D points.
class PointCloud {
 public:
  PointCloud() = default;

  /// Throws Error(NonFinite) if any coordinate is NaN or infinite.
  explicit PointCloud(std::vector<Point3> points);

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const Point3& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point3> points() const noexcept { return points_; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  /// Empty box when the cloud is empty.
  Box3 bounding_box() const;

  friend bool operator==(const PointCloud& a, const PointCloud& b) { return a.points_ == b.points_; }

 private:
  std::vector<Point3> points_;
};

/// Angle-axis rotation: direction is the axis, norm is the angle in radians.
struct RotationVector {
  Vector3 value = Vector3::Zero();

  RotationVector() = default;
  explicit RotationVector(const Vector3& v) : value(v) {}
  RotationVector(double rx, double ry, double rz) : value(rx, ry, rz) {}

  double angle() const { return value.norm(); }
  bool in_pi_ball() const { return value.norm() <= kPi; }

  friend bool operator==(const RotationVector& a, const RotationVector& b) { return a.value == b.value; }
};

Matrix3 rodrigues(const RotationVector& r);

/// True when R^T R = I and det R = +1 within `tolerance`.
bool is_rotation(const Matrix3& r, double tolerance = kRotationTolerance);

struct RigidTransform {
  Matrix3 rotation = Matrix3::Identity();
  Vector3 translation = Vector3::Zero();

  RigidTransform() = default;
  RigidTransform(const Matrix3& r, const Vector3& t) : rotation(r), translation(t) {}

  Point3 apply(const Point3& p) const { return rotation * p + translation; }

  /// Composition: (*this * other).apply(p) == this->apply(other.apply(p)).
  RigidTransform operator*(const RigidTransform& other) const {
    return {rotation * other.rotation, rotation * other.translation + translation};
  }

  RigidTransform inverse() const {
    const Matrix3 rt = rotation.transpose();
    return {rt, -(rt * translation)};
  }
};

inline Point3 apply(const RigidTransform& t, const Point3& p) { return t.apply(p); }

PointCloud apply(const RigidTransform& t, const PointCloud& cloud);

inline double dist_linf(const Point3& a, const Point3& b) { return (a - b).cwiseAbs().maxCoeff(); }
inline double dist_l2(const Point3& a, const Point3& b) { return (a - b).norm(); }

/// Geodesic angle between two rotations in [0, pi].
double angular_error(const Matrix3& estimated, const Matrix3& truth);

}  // namespace tivreg
