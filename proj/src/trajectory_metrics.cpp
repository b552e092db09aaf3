#include "dropzone/trajectory_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dropzone/grounding.hpp"

namespace dropzone {

namespace {

constexpr double kRadToDeg = 180.0 / M_PI;

void require_equal_lengths(const Trajectory& gt, const Trajectory& est) {
  if (gt.size() != est.size()) {
    raise(Errc::length_mismatch, "trajectories must have equal length (" +
                                     std::to_string(gt.size()) + " vs " +
                                     std::to_string(est.size()) + ")");
  }
}

double median_interval(const Trajectory& traj) {
  std::vector<double> gaps;
  gaps.reserve(traj.size());
  for (std::size_t i = 1; i < traj.size(); ++i) {
    gaps.push_back(traj[i].timestamp - traj[i - 1].timestamp);
  }
  if (gaps.empty()) return 0.0;
  std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
  return gaps[gaps.size() / 2];
}

}  // namespace

Sim3Transform umeyama_align(const Trajectory& gt, const Trajectory& est) {
  require_equal_lengths(gt, est);
  if (gt.size() < 3) raise(Errc::too_short, "alignment needs at least 3 poses");

  std::vector<Vec3> src = est.positions();
  std::vector<Vec3> dst = gt.positions();
  ScaleRotation sr = umeyama_scale_rotation(src, dst);

  Vec3 mu_src, mu_dst;
  for (std::size_t i = 0; i < src.size(); ++i) {
    mu_src = mu_src + src[i];
    mu_dst = mu_dst + dst[i];
  }
  double inv_n = 1.0 / static_cast<double>(src.size());
  mu_src = mu_src * inv_n;
  mu_dst = mu_dst * inv_n;

  Sim3Transform t;
  t.scale = sr.scale;
  t.rotation = sr.rotation;
  t.translation = mu_dst - sr.rotation * mu_src * sr.scale;
  return t;
}

double ate(const Trajectory& gt, const Trajectory& est) {
  Sim3Transform t = umeyama_align(gt, est);
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    Vec3 aligned = apply_sim3_point(t, est[i].pose.translation);
    sum_sq += (gt[i].pose.translation - aligned).eigen().squaredNorm();
  }
  return std::sqrt(sum_sq / static_cast<double>(gt.size()));
}

std::pair<double, double> rpe(const Trajectory& gt, const Trajectory& est, int delta) {
  require_equal_lengths(gt, est);
  if (delta < 1) raise(Errc::invalid_argument, "rpe delta must be >= 1");
  if (gt.size() <= static_cast<std::size_t>(delta)) {
    raise(Errc::too_short, "rpe needs more than delta poses");
  }

  const double scale = umeyama_align(gt, est).scale;

  const std::size_t n_terms = gt.size() - static_cast<std::size_t>(delta);
  double sum_trans_sq = 0.0;
  double sum_rot_sq = 0.0;
  for (std::size_t i = 0; i < n_terms; ++i) {
    PoseSE3 est_a = est[i].pose;
    PoseSE3 est_b = est[i + delta].pose;
    est_a.translation = est_a.translation * scale;
    est_b.translation = est_b.translation * scale;

    PoseSE3 q = gt[i].pose.inverse() * gt[i + delta].pose;
    PoseSE3 p = est_a.inverse() * est_b;
    PoseSE3 e = q.inverse() * p;

    sum_trans_sq += e.translation.eigen().squaredNorm();
    double ang = e.rotation.angle() * kRadToDeg;
    sum_rot_sq += ang * ang;
  }
  double inv = 1.0 / static_cast<double>(n_terms);
  return {std::sqrt(sum_trans_sq * inv), std::sqrt(sum_rot_sq * inv)};
}

std::pair<Trajectory, Trajectory> associate(const Trajectory& gt, const Trajectory& est,
                                            std::size_t* n_dropped) {
  if (gt.size() == est.size()) {
    if (n_dropped) *n_dropped = 0;
    return {gt, est};
  }

  const double tol = 0.5 * median_interval(gt);
  Trajectory gt_out, est_out;
  gt_out.set_frame(gt.frame());
  est_out.set_frame(est.frame());

  std::size_t j = 0;
  std::size_t matched = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const double ts = gt[i].timestamp;
    while (j + 1 < est.size() &&
           std::abs(est[j + 1].timestamp - ts) <= std::abs(est[j].timestamp - ts)) {
      ++j;
    }
    if (j < est.size() && std::abs(est[j].timestamp - ts) <= tol) {
      gt_out.push_back(gt[i]);
      est_out.push_back(est[j]);
      ++matched;
      ++j;
      if (j == est.size()) break;
    }
  }
  if (n_dropped) *n_dropped = (gt.size() - matched) + (est.size() - matched);
  return {std::move(gt_out), std::move(est_out)};
}

TrajectoryErrorReport evaluate_trajectory(const Trajectory& gt, const Trajectory& est,
                                          int delta) {
  std::size_t dropped = 0;
  auto [g, e] = associate(gt, est, &dropped);

  TrajectoryErrorReport report;
  report.n_poses = g.size();
  report.n_dropped = dropped;
  report.ate_rmse = ate(g, e);
  auto [rpe_t, rpe_r] = rpe(g, e, delta);
  report.rpe_trans_rmse = rpe_t;
  report.rpe_rot_rmse_deg = rpe_r;
  return report;
}

}  // namespace dropzone
