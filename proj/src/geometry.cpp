#include "dropzone/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace dropzone {

namespace {

constexpr double kEntryTol = 1e-9;
constexpr double kRepairTol = 1e-3;

bool is_rotation(const Eigen::Matrix3d& m, double tol) {
  Eigen::Matrix3d gram = m.transpose() * m;
  if (((gram - Eigen::Matrix3d::Identity()).array().abs() > tol).any()) return false;
  return std::abs(m.determinant() - 1.0) <= tol;
}

Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Matrix3d u = svd.matrixU();
    u.col(2) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return r;
}

}  // namespace

bool Vec3::finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

RotationSO3 RotationSO3::from_matrix(const Eigen::Matrix3d& m) {
  if (!m.allFinite()) raise(Errc::invalid_argument, "rotation matrix has non-finite entries");
  if (is_rotation(m, kEntryTol)) return RotationSO3(m, unchecked_tag{});
  Eigen::Matrix3d repaired = nearest_rotation(m);
  double deviation = (m - repaired).array().abs().maxCoeff();
  if (deviation > kRepairTol) {
    raise(Errc::invalid_argument, "matrix is not a rotation (deviation " +
                                      std::to_string(deviation) + " exceeds 1e-3)");
  }
  return RotationSO3(repaired, unchecked_tag{});
}

RotationSO3 RotationSO3::from_quaternion_xyzw(double qx, double qy, double qz, double qw) {
  double norm = std::sqrt(qx * qx + qy * qy + qz * qz + qw * qw);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kRepairTol) {
    raise(Errc::invalid_argument, "quaternion norm deviates from 1 by more than 1e-3");
  }
  Eigen::Quaterniond q(qw / norm, qx / norm, qy / norm, qz / norm);
  return RotationSO3(q.toRotationMatrix(), unchecked_tag{});
}

RotationSO3 RotationSO3::from_axis_angle(const Vec3& axis, double angle_rad) {
  Eigen::Vector3d a = axis.eigen();
  if (a.norm() == 0.0) raise(Errc::invalid_argument, "axis must be nonzero");
  Eigen::AngleAxisd aa(angle_rad, a.normalized());
  return RotationSO3(aa.toRotationMatrix(), unchecked_tag{});
}

RotationSO3 RotationSO3::rot_z(double angle_rad) {
  return from_axis_angle({0.0, 0.0, 1.0}, angle_rad);
}

RotationSO3 RotationSO3::transposed() const {
  return RotationSO3(m_.transpose(), unchecked_tag{});
}

RotationSO3 RotationSO3::operator*(const RotationSO3& o) const {
  // Products of valid rotations drift by at most a few ulps; keep them exact
  // enough for long compositions without re-validating every product.
  return RotationSO3(m_ * o.m_, unchecked_tag{});
}

std::array<double, 4> RotationSO3::quaternion_xyzw() const {
  Eigen::Quaterniond q(m_);
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  return {q.x(), q.y(), q.z(), q.w()};
}

double RotationSO3::angle() const {
  Eigen::Quaterniond q(m_);
  double vec_norm = q.vec().norm();
  return 2.0 * std::atan2(vec_norm, std::abs(q.w()));
}

double rotation_distance(const RotationSO3& a, const RotationSO3& b) {
  return (a.transposed() * b).angle();
}

PoseSE3 PoseSE3::inverse() const {
  RotationSO3 rt = rotation.transposed();
  return {rt, rt * translation * -1.0};
}

PoseSE3 PoseSE3::operator*(const PoseSE3& o) const {
  return {rotation * o.rotation, rotation * o.translation + translation};
}

void Sim3Transform::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    raise(Errc::invalid_argument, "Sim3 scale must be positive and finite");
  }
  if (!translation.finite()) raise(Errc::invalid_argument, "Sim3 translation must be finite");
}

Sim3Transform Sim3Transform::inverse() const {
  RotationSO3 rt = rotation.transposed();
  return {1.0 / scale, rt, rt * translation * (-1.0 / scale)};
}

Vec3 apply_sim3_point(const Sim3Transform& t, const Vec3& p) {
  return t.rotation * p * t.scale + t.translation;
}

PoseSE3 apply_sim3_pose(const Sim3Transform& t, const PoseSE3& p) {
  return {t.rotation * p.rotation, apply_sim3_point(t, p.translation)};
}

Sim3Transform compose(const Sim3Transform& t2, const Sim3Transform& t1) {
  return {t2.scale * t1.scale, t2.rotation * t1.rotation,
          t2.rotation * t1.translation * t2.scale + t2.translation};
}

}  // namespace dropzone
