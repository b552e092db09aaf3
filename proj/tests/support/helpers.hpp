#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dropzone/geometry.hpp"
#include "dropzone/rng.hpp"
#include "dropzone/trajectory.hpp"

namespace testsupport {

/// Scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("dropzone_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline dropzone::RotationSO3 random_rotation(dropzone::SplitMix64& rng) {
  double a = rng.gaussian(), b = rng.gaussian(), c = rng.gaussian(), d = rng.gaussian();
  double n = std::sqrt(a * a + b * b + c * c + d * d);
  return dropzone::RotationSO3::from_quaternion_xyzw(a / n, b / n, c / n, d / n);
}

inline dropzone::Sim3Transform random_sim3(dropzone::SplitMix64& rng, double s_min = 0.1,
                                           double s_max = 10.0) {
  dropzone::Sim3Transform t;
  t.scale = std::exp(rng.uniform(std::log(s_min), std::log(s_max)));
  t.rotation = random_rotation(rng);
  t.translation = {rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
  return t;
}

/// Random-walk trajectory with mild attitude wobble; non-degenerate motion.
inline dropzone::Trajectory random_walk_trajectory(dropzone::SplitMix64& rng, std::size_t n,
                                                   double step = 0.5) {
  dropzone::Trajectory traj;
  dropzone::Vec3 pos{0.0, 0.0, 10.0};
  for (std::size_t i = 0; i < n; ++i) {
    pos = pos + dropzone::Vec3{step * rng.gaussian(), step * rng.gaussian(),
                               step * rng.gaussian()};
    dropzone::TimedPose tp;
    tp.timestamp = 0.1 * static_cast<double>(i);
    tp.pose.translation = pos;
    tp.pose.rotation = random_rotation(rng);
    traj.push_back(tp);
  }
  return traj;
}

inline dropzone::Trajectory apply_to_trajectory(const dropzone::Sim3Transform& t,
                                                const dropzone::Trajectory& traj) {
  dropzone::Trajectory out;
  for (const auto& tp : traj) {
    out.push_back({tp.timestamp, dropzone::apply_sim3_pose(t, tp.pose)});
  }
  out.set_frame(traj.frame());
  return out;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testsupport
