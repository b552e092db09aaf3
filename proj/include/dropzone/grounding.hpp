#pragma once

#include <utility>
#include <vector>

#include "dropzone/cloud.hpp"
#include "dropzone/geometry.hpp"
#include "dropzone/trajectory.hpp"

namespace dropzone {

struct GroundingConfig {
  /// Temporal strides used when forming inter-frame displacements. Strides
  /// that do not fit the trajectory length are skipped.
  std::vector<int> strides{1, 2, 4, 8};
  int min_pairs = 3;
  double degenerate_ratio_tol = 1e-6;

  void validate() const;
};

struct DisplacementPair {
  Vec3 dv;  // predicted camera displacement (reconstruction frame)
  Vec3 dp;  // platform displacement (metric frame)
};

struct DisplacementPairs {
  std::vector<DisplacementPair> pairs;
  std::vector<int> strides_used;
};

/// Matched inter-frame displacements (C_{i+k} - C_i) over every configured
/// stride k that fits. Both trajectories must be index-aligned and equally
/// long; yields sum_k (N - k) pairs.
DisplacementPairs relative_displacements(const Trajectory& traj_v, const Trajectory& traj_p,
                                         const GroundingConfig& cfg);

struct ScaleRotation {
  double scale = 1.0;
  RotationSO3 rotation;
};

/// Closed-form least-squares similarity between corresponding point sets:
/// minimizes sum ||dst_i - s * R * src_i||^2 over s > 0 and R in SO(3).
/// Mean-centers both sets, builds the cross-covariance, and solves by SVD
/// with the determinant sign correction; the scale comes from the trace
/// formula. Throws DegenerateMotion when the source set has zero spread.
ScaleRotation umeyama_scale_rotation(const std::vector<Vec3>& src, const std::vector<Vec3>& dst);

struct GroundingFit {
  double scale = 1.0;
  RotationSO3 rotation;
  double residual = 0.0;  // sum ||dp - s R dv||^2 at the optimum
  std::size_t n_pairs = 0;
};

/// Recovers (s, R) from displacement pairs. Fails with InsufficientPairs
/// below cfg.min_pairs, and with DegenerateMotion when the displacement set
/// carries no usable spread (hover with no net motion).
GroundingFit fit_sim3_displacements(const DisplacementPairs& pairs, const GroundingConfig& cfg);

/// Translation that pins the first predicted camera center onto the first
/// platform position: t = C0_p - s * R * C0_v.
Vec3 anchor_translation(double scale, const RotationSO3& rotation, const Trajectory& traj_v,
                        const Trajectory& traj_p);

/// Applies the similarity to every pose and every point; labels and
/// confidences pass through untouched. Outputs are tagged metric.
std::pair<Trajectory, LabeledPointCloud> ground(const Trajectory& traj_v,
                                                const LabeledPointCloud& cloud,
                                                const Sim3Transform& t);

/// sum ||dp - s R dv||^2 for a given (s, R); used to report the fit residual
/// and by tests as an independent check.
double displacement_residual(const DisplacementPairs& pairs, double scale,
                             const RotationSO3& rotation);

}  // namespace dropzone
