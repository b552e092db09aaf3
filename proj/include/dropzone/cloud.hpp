#pragma once

#include <string>
#include <vector>

#include "dropzone/geometry.hpp"
#include "dropzone/trajectory.hpp"

namespace dropzone {

/// Terrain class ids used across the toolkit. Class 0 is reserved for
/// unlabeled points and never takes part in majority voting.
namespace classes {
inline constexpr int kUnlabeled = 0;
inline constexpr int kGrass = 1;
inline constexpr int kSoil = 2;
inline constexpr int kPavement = 3;
inline constexpr int kGravel = 4;
inline constexpr int kRock = 5;
inline constexpr int kWater = 6;
inline constexpr int kStructure = 7;
}  // namespace classes

struct LabeledPoint {
  Vec3 position;
  int class_id = classes::kUnlabeled;
  double confidence = 0.0;  // [0, 1]
};

class LabeledPointCloud {
 public:
  LabeledPointCloud() = default;
  LabeledPointCloud(std::vector<LabeledPoint> points, FrameId frame);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const LabeledPoint& operator[](std::size_t i) const { return points_[i]; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  FrameId frame() const { return frame_; }
  void set_frame(FrameId frame) { frame_ = frame; }

  void push_back(const LabeledPoint& p);
  void reserve(std::size_t n) { points_.reserve(n); }

 private:
  std::vector<LabeledPoint> points_;
  FrameId frame_ = FrameId::reconstruction;
};

/// Text cloud file, one point per line: `x y z class_id confidence`.
/// '#' comments; `# frame: <tag>` carries the frame tag; 9 significant
/// digits, byte-stable across write/read/write.
LabeledPointCloud read_cloud(const std::string& path);
void write_cloud(const LabeledPointCloud& cloud, const std::string& path);

}  // namespace dropzone
