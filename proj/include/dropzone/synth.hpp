#pragma once

#include <cstdint>
#include <string>

#include "dropzone/cloud.hpp"
#include "dropzone/geometry.hpp"
#include "dropzone/raster.hpp"
#include "dropzone/trajectory.hpp"

namespace dropzone {

struct SceneParams {
  double theta_deg = 20.0;   // incline angle
  int n_rocks = 12;          // rockfield / smoothed-rocks
  double step_height = 1.5;  // step scene
};

/// `key=value` pairs separated by commas, e.g. "theta_deg=25,n_rocks=8".
SceneParams parse_scene_params(const std::string& text);

/// A complete synthetic episode. The cloud and traj_v live in the
/// reconstruction frame; traj_p is gt_sim3 applied to traj_v, exactly, so
/// grounding against it must recover gt_sim3.
struct SceneBundle {
  std::string scene;
  uint64_t seed = 0;
  SceneParams params;
  LabeledPointCloud cloud;
  Trajectory traj_v;
  Trajectory traj_p;
  Sim3Transform gt_sim3;
  Raster gt_trav;  // binary, on the scene grid (metric frame)
  GridSpec grid;
  double goal_x = 0.0;  // suggested deployment goal (metric frame)
  double goal_y = 0.0;
  std::string manifest;  // key: value provenance record
};

/// Deterministic desk-scale scenes on a 16 m x 16 m region (64x64 cells at
/// 0.25 m). Names: incline, step, culvert, rockfield, smoothed-rocks. The
/// same (name, seed, params) always yields a byte-identical bundle; all
/// randomness flows from one SplitMix64 stream.
SceneBundle synth_scene(const std::string& name, uint64_t seed, const SceneParams& params = {});

/// Writes traj_v.tum, traj_p.tum, cloud.txt, gt_trav.asc, and manifest.txt.
void write_scene(const SceneBundle& bundle, const std::string& dir);

}  // namespace dropzone
