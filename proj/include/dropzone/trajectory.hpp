#pragma once

#include <string>
#include <vector>

#include "dropzone/geometry.hpp"

namespace dropzone {

enum class FrameId { reconstruction, metric };

const char* frame_id_name(FrameId id);

struct TimedPose {
  double timestamp = 0.0;  // seconds
  PoseSE3 pose;            // camera-to-world
};

/// Ordered pose sequence with strictly increasing timestamps.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::vector<TimedPose> poses, FrameId frame);

  std::size_t size() const { return poses_.size(); }
  bool empty() const { return poses_.empty(); }
  const TimedPose& operator[](std::size_t i) const { return poses_[i]; }
  auto begin() const { return poses_.begin(); }
  auto end() const { return poses_.end(); }

  FrameId frame() const { return frame_; }
  void set_frame(FrameId frame) { frame_ = frame; }

  /// Rejects timestamps that do not strictly increase.
  void push_back(const TimedPose& tp);

  /// Camera centers (pose translations), in order.
  std::vector<Vec3> positions() const;

 private:
  std::vector<TimedPose> poses_;
  FrameId frame_ = FrameId::reconstruction;
};

/// Text trajectory file, one pose per line:
///   timestamp tx ty tz qx qy qz qw
/// '#' starts a comment; a `# frame: <reconstruction|metric>` comment carries
/// the frame tag. Values are written with 9 significant digits, which makes
/// write -> read -> write byte-stable.
Trajectory read_trajectory(const std::string& path);
void write_trajectory(const Trajectory& traj, const std::string& path);

}  // namespace dropzone
