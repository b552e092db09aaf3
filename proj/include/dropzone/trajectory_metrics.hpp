#pragma once

#include <cstddef>
#include <utility>

#include "dropzone/geometry.hpp"
#include "dropzone/trajectory.hpp"

namespace dropzone {

struct TrajectoryErrorReport {
  double ate_rmse = 0.0;           // meters
  double rpe_trans_rmse = 0.0;     // meters
  double rpe_rot_rmse_deg = 0.0;   // degrees
  std::size_t n_poses = 0;         // poses evaluated after association
  std::size_t n_dropped = 0;       // poses dropped by timestamp matching
};

/// Full Sim(3) Umeyama alignment over absolute positions: the transform T
/// minimizing sum ||gt_i - T(est_i)||^2. Needs >= 3 poses of equal count.
Sim3Transform umeyama_align(const Trajectory& gt, const Trajectory& est);

/// Absolute trajectory error: RMSE of position residuals after Sim(3)
/// alignment of est onto gt (alignment happens inside, so a globally
/// transformed copy of gt scores 0).
double ate(const Trajectory& gt, const Trajectory& est);

/// Relative pose error over index gaps of `delta`: for each i, the error
/// motion E_i = (gt_i^-1 gt_{i+delta})^-1 (est_i^-1 est_{i+delta}).
/// Returns (translation RMSE in meters, rotation RMSE in degrees). The
/// estimated translations are pre-multiplied by the Umeyama scale (scale
/// only; RGB pipelines are scale-ambiguous, rotation needs no correction).
std::pair<double, double> rpe(const Trajectory& gt, const Trajectory& est, int delta);

/// Index-aligns when the lengths match; otherwise pairs poses by nearest
/// timestamp within half the median gt frame interval and drops the rest.
/// Returns matched (gt, est) and the number of dropped poses.
std::pair<Trajectory, Trajectory> associate(const Trajectory& gt, const Trajectory& est,
                                            std::size_t* n_dropped);

/// Association + ATE + RPE in one pass; the report carries counts so the
/// caller can surface dropped-pose warnings.
TrajectoryErrorReport evaluate_trajectory(const Trajectory& gt, const Trajectory& est, int delta);

}  // namespace dropzone
