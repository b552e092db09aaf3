#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dropzone/cloud.hpp"
#include "dropzone/geometry.hpp"

namespace dropzone {

/// One depth frame with pinhole intrinsics and extrinsics. The stored
/// (rotation, translation) map world to camera, x_cam = R * X + t, matching
/// the unprojection formula X = R^-1 (K^-1 [u, v, 1]^T d - t). Depth values
/// <= 0 (or non-finite) mean no data at that pixel.
struct DepthFrame {
  int width = 0;
  int height = 0;
  std::vector<float> depth;  // row-major, height * width
  double fx = 1.0, fy = 1.0, cx = 0.0, cy = 0.0;
  RotationSO3 rotation;  // world -> camera
  Vec3 translation;
  std::vector<float> confidence;  // optional per-pixel [0,1]; empty = none

  float depth_at(int u, int v) const { return depth[static_cast<std::size_t>(v) * width + u]; }
  bool valid_depth(int u, int v) const {
    float d = depth_at(u, v);
    return std::isfinite(d) && d > 0.0f;
  }
  /// Camera position in world coordinates: -R^T t.
  Vec3 camera_center() const;
  void validate() const;
};

/// An instance mask with per-pixel scores in [0, 1]; 0 means the pixel is
/// outside the instance. Binary masks use scores 0/1.
struct InstanceMask {
  int instance_id = 0;
  int class_id = classes::kUnlabeled;
  double quality = 1.0;  // [0, 1]
  int width = 0;
  int height = 0;
  std::vector<float> scores;

  float score_at(int u, int v) const { return scores[static_cast<std::size_t>(v) * width + u]; }
  bool covers(int u, int v) const { return score_at(u, v) > 0.0f; }
  std::size_t area() const;
};

struct UnprojectedPoint {
  int u = 0;
  int v = 0;
  Vec3 position;
};

struct UnprojectResult {
  std::vector<UnprojectedPoint> points;  // pixel scan order (v outer, u inner)
  std::size_t skipped = 0;               // invalid-depth pixels
};

/// Back-projects every valid-depth pixel to world coordinates.
UnprojectResult unproject(const DepthFrame& frame);

/// Intersection-over-union of the binarized masks (score > 0).
double mask_iou(const InstanceMask& a, const InstanceMask& b);

/// Greedy overlap suppression: masks are visited by descending quality
/// (instance id breaks quality ties), and one is dropped when its IoU with
/// any retained mask reaches the threshold. Output order is deterministic
/// and independent of input order.
std::vector<InstanceMask> mask_nms(std::vector<InstanceMask> masks, double iou_threshold);

/// 1 - |union of mask pixels| / (width * height).
double uncovered_ratio(const std::vector<InstanceMask>& masks, int width, int height);

/// New-keyframe test: fires when the uncovered ratio rises by strictly more
/// than delta over the reference keyframe's ratio.
bool keyframe_trigger(double rho_t, double rho_ref, double delta);

/// Unprojects the frame and labels each point with the arg-max-score mask at
/// its pixel (score ties go to the lowest instance id). Uncovered pixels get
/// class 0 with confidence 0; covered pixels get the winning mask's class
/// and quality, multiplied by the frame's per-pixel confidence if present.
LabeledPointCloud assign_labels(const DepthFrame& frame, const std::vector<InstanceMask>& masks);

enum class TargetMethod { medoid, sampled_medoid, centroid };

const char* target_method_name(TargetMethod m);

struct SemanticTarget {
  int class_id = 0;
  Vec3 representative;
  double confidence = 0.0;  // mean point confidence over the class
  TargetMethod method = TargetMethod::medoid;
  std::size_t point_count = 0;
};

struct TargetOptions {
  /// Exact medoid up to this many points; larger sets use the medoid of a
  /// seeded uniform subsample. 0 selects the centroid fallback outright.
  std::size_t medoid_cap = 2000;
  uint64_t seed = 0;
};

/// Representative 3D coordinate for a class: the medoid (member minimizing
/// summed distances to the class set), a sampled medoid for large sets, or
/// the centroid when medoid_cap is 0. Throws ClassAbsent if no point of the
/// class exists.
SemanticTarget extract_target(const LabeledPointCloud& cloud, int class_id,
                              const TargetOptions& options = {});

/// Depth raster file: a single text header line `DEPTH <W> <H> fx fy cx cy`
/// followed by W*H little-endian float32 values, row-major.
DepthFrame read_depth_raster(const std::string& path);
void write_depth_raster(const DepthFrame& frame, const std::string& path);

/// Binary PGM (P5, maxval 255) instance mask. The filename encodes identity:
/// frame{t:05}_inst{k:04}_class{c}.pgm. Quality rides in a `# quality <q>`
/// comment (defaults to 1). Pixel value / 255 is the per-pixel score.
InstanceMask read_mask_pgm(const std::string& path);
void write_mask_pgm(const InstanceMask& mask, const std::string& path);
std::string mask_filename(int frame_index, int instance_id, int class_id);

struct LiftOptions {
  double nms_iou = -1.0;  // <= 0 disables per-frame suppression
};

/// Directory pipeline: depth frames `frame{t:05}.depth` (optional
/// `frame{t:05}.conf` confidence rasters) under depth_dir, one pose line per
/// frame (sorted by frame index) in poses_path, and mask files under
/// masks_dir. Produces the concatenated labeled cloud in frame-index order.
LabeledPointCloud lift_directory(const std::string& depth_dir, const std::string& poses_path,
                                 const std::string& masks_dir, const LiftOptions& options,
                                 std::size_t* skipped_pixels);

}  // namespace dropzone
