#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <array>

#include "dropzone/errors.hpp"

namespace dropzone {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}
  explicit Vec3(const Eigen::Vector3d& v) : x(v.x()), y(v.y()), z(v.z()) {}

  Eigen::Vector3d eigen() const { return {x, y, z}; }
  double norm() const { return eigen().norm(); }
  bool finite() const;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {s * x, s * y, s * z}; }
};

double distance(const Vec3& a, const Vec3& b);

/// Proper rotation (det = +1, orthonormal). Construction validates; matrices
/// read from files go through from_matrix(), which repairs small
/// non-orthonormality by polar decomposition and rejects anything worse.
class RotationSO3 {
 public:
  RotationSO3() : m_(Eigen::Matrix3d::Identity()) {}

  static RotationSO3 identity() { return RotationSO3(); }

  /// Validates orthonormality (1e-9 per entry) and det = +1; repairs inputs
  /// within 1e-3 of a rotation via SVD polar projection, rejects the rest.
  static RotationSO3 from_matrix(const Eigen::Matrix3d& m);

  /// Quaternion in (x, y, z, w) order, Hamilton convention. Normalizes;
  /// rejects quaternions whose norm deviates from 1 by more than 1e-3.
  static RotationSO3 from_quaternion_xyzw(double qx, double qy, double qz, double qw);

  static RotationSO3 from_axis_angle(const Vec3& axis, double angle_rad);
  static RotationSO3 rot_z(double angle_rad);

  const Eigen::Matrix3d& matrix() const { return m_; }
  RotationSO3 transposed() const;
  RotationSO3 operator*(const RotationSO3& o) const;
  Vec3 operator*(const Vec3& v) const { return Vec3(m_ * v.eigen()); }

  /// (qx, qy, qz, qw), w >= 0.
  std::array<double, 4> quaternion_xyzw() const;

  /// Rotation angle in radians, in [0, pi]. Uses the atan2 form, which is
  /// accurate near identity where acos((tr-1)/2) loses precision.
  double angle() const;

 private:
  struct unchecked_tag {};
  RotationSO3(const Eigen::Matrix3d& m, unchecked_tag) : m_(m) {}

  Eigen::Matrix3d m_;
};

/// Angle between two rotations in radians.
double rotation_distance(const RotationSO3& a, const RotationSO3& b);

/// Rigid pose, camera-to-world convention: x_world = R * x_cam + t.
struct PoseSE3 {
  RotationSO3 rotation;
  Vec3 translation;

  static PoseSE3 identity() { return {}; }
  PoseSE3 inverse() const;
  PoseSE3 operator*(const PoseSE3& o) const;
};

/// Similarity transform p -> s * R * p + t with s > 0.
struct Sim3Transform {
  double scale = 1.0;
  RotationSO3 rotation;
  Vec3 translation;

  static Sim3Transform identity() { return {}; }
  void validate() const;
  Sim3Transform inverse() const;
};

Vec3 apply_sim3_point(const Sim3Transform& t, const Vec3& p);
PoseSE3 apply_sim3_pose(const Sim3Transform& t, const PoseSE3& p);

/// compose(t2, t1) applies t1 first: result(p) = t2(t1(p)).
Sim3Transform compose(const Sim3Transform& t2, const Sim3Transform& t1);

}  // namespace dropzone
