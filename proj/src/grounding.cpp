#include "dropzone/grounding.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace dropzone {

void GroundingConfig::validate() const {
  if (strides.empty()) raise(Errc::config_invalid, "grounding strides must be non-empty");
  for (int k : strides) {
    if (k < 1) raise(Errc::config_invalid, "grounding strides must be >= 1");
  }
  if (min_pairs < 1) raise(Errc::config_invalid, "min_pairs must be >= 1");
  if (!(degenerate_ratio_tol > 0.0)) {
    raise(Errc::config_invalid, "degenerate_ratio_tol must be positive");
  }
}

DisplacementPairs relative_displacements(const Trajectory& traj_v, const Trajectory& traj_p,
                                         const GroundingConfig& cfg) {
  cfg.validate();
  if (traj_v.size() != traj_p.size()) {
    raise(Errc::length_mismatch, "trajectories must have equal length (" +
                                     std::to_string(traj_v.size()) + " vs " +
                                     std::to_string(traj_p.size()) + ")");
  }
  const std::size_t n = traj_v.size();

  DisplacementPairs out;
  for (int k : cfg.strides) {
    if (static_cast<std::size_t>(k) >= n) continue;  // stride does not fit
    out.strides_used.push_back(k);
    for (std::size_t i = 0; i + k < n; ++i) {
      out.pairs.push_back({traj_v[i + k].pose.translation - traj_v[i].pose.translation,
                           traj_p[i + k].pose.translation - traj_p[i].pose.translation});
    }
  }
  if (out.pairs.empty()) {
    raise(Errc::too_short, "no stride fits a trajectory of length " + std::to_string(n));
  }
  return out;
}

ScaleRotation umeyama_scale_rotation(const std::vector<Vec3>& src, const std::vector<Vec3>& dst) {
  if (src.size() != dst.size()) raise(Errc::length_mismatch, "point sets differ in size");
  const std::size_t n = src.size();
  if (n == 0) raise(Errc::insufficient_pairs, "empty point sets");

  Eigen::Vector3d mu_src = Eigen::Vector3d::Zero();
  Eigen::Vector3d mu_dst = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    mu_src += src[i].eigen();
    mu_dst += dst[i].eigen();
  }
  mu_src /= static_cast<double>(n);
  mu_dst /= static_cast<double>(n);

  // Cross-covariance of the centered sets and the source variance.
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  double src_var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::Vector3d xs = src[i].eigen() - mu_src;
    Eigen::Vector3d xd = dst[i].eigen() - mu_dst;
    cov += xd * xs.transpose();
    src_var += xs.squaredNorm();
  }
  cov /= static_cast<double>(n);
  src_var /= static_cast<double>(n);

  if (!(src_var > 0.0)) {
    raise(Errc::degenerate_motion, "source displacements have no spread; scale is undefined");
  }

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Vector3d s_diag = Eigen::Vector3d::Ones();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0) s_diag(2) = -1.0;

  Eigen::Matrix3d r = svd.matrixU() * s_diag.asDiagonal() * svd.matrixV().transpose();
  double scale = svd.singularValues().dot(s_diag) / src_var;
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    raise(Errc::degenerate_motion, "recovered scale is not positive");
  }
  return {scale, RotationSO3::from_matrix(r)};
}

GroundingFit fit_sim3_displacements(const DisplacementPairs& pairs, const GroundingConfig& cfg) {
  cfg.validate();
  const std::size_t n = pairs.pairs.size();
  if (n < static_cast<std::size_t>(cfg.min_pairs)) {
    raise(Errc::insufficient_pairs, "need at least " + std::to_string(cfg.min_pairs) +
                                        " displacement pairs, got " + std::to_string(n));
  }

  std::vector<Vec3> dv(n), dp(n);
  double mean_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dv[i] = pairs.pairs[i].dv;
    dp[i] = pairs.pairs[i].dp;
    mean_norm += dv[i].norm();
  }
  mean_norm /= static_cast<double>(n);

  // Hover guard: a predicted trajectory with (near-)zero net motion cannot
  // constrain scale. Largest eigenvalue of the dv covariance against the
  // mean displacement norm, per the configured ratio.
  Eigen::Vector3d mu = Eigen::Vector3d::Zero();
  for (const auto& d : dv) mu += d.eigen();
  mu /= static_cast<double>(n);
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& d : dv) {
    Eigen::Vector3d c = d.eigen() - mu;
    cov += c * c.transpose();
  }
  cov /= static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig;
  eig.computeDirect(cov);
  double lambda_max = eig.eigenvalues().maxCoeff();
  if (mean_norm == 0.0 || lambda_max < cfg.degenerate_ratio_tol * mean_norm) {
    raise(Errc::degenerate_motion, "predicted displacements are degenerate (no net motion)");
  }

  ScaleRotation sr = umeyama_scale_rotation(dv, dp);
  GroundingFit fit;
  fit.scale = sr.scale;
  fit.rotation = sr.rotation;
  fit.n_pairs = n;
  fit.residual = displacement_residual(pairs, sr.scale, sr.rotation);
  return fit;
}

Vec3 anchor_translation(double scale, const RotationSO3& rotation, const Trajectory& traj_v,
                        const Trajectory& traj_p) {
  if (traj_v.empty() || traj_p.empty()) {
    raise(Errc::empty_trajectory, "anchor_translation needs non-empty trajectories");
  }
  const Vec3& c0_v = traj_v[0].pose.translation;
  const Vec3& c0_p = traj_p[0].pose.translation;
  return c0_p - rotation * c0_v * scale;
}

std::pair<Trajectory, LabeledPointCloud> ground(const Trajectory& traj_v,
                                                const LabeledPointCloud& cloud,
                                                const Sim3Transform& t) {
  t.validate();
  Trajectory out_traj;
  for (const auto& tp : traj_v) out_traj.push_back({tp.timestamp, apply_sim3_pose(t, tp.pose)});
  out_traj.set_frame(FrameId::metric);

  LabeledPointCloud out_cloud;
  out_cloud.reserve(cloud.size());
  for (const auto& p : cloud) {
    out_cloud.push_back({apply_sim3_point(t, p.position), p.class_id, p.confidence});
  }
  out_cloud.set_frame(FrameId::metric);
  return {std::move(out_traj), std::move(out_cloud)};
}

double displacement_residual(const DisplacementPairs& pairs, double scale,
                             const RotationSO3& rotation) {
  double sum = 0.0;
  for (const auto& pr : pairs.pairs) {
    sum += (pr.dp - rotation * pr.dv * scale).eigen().squaredNorm();
  }
  return sum;
}

}  // namespace dropzone
