#include "dropzone/trajectory.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace dropzone {

const char* frame_id_name(FrameId id) {
  return id == FrameId::metric ? "metric" : "reconstruction";
}

Trajectory::Trajectory(std::vector<TimedPose> poses, FrameId frame)
    : poses_(std::move(poses)), frame_(frame) {
  for (std::size_t i = 1; i < poses_.size(); ++i) {
    if (!(poses_[i].timestamp > poses_[i - 1].timestamp)) {
      raise(Errc::invalid_argument, "trajectory timestamps must strictly increase");
    }
  }
}

void Trajectory::push_back(const TimedPose& tp) {
  if (!poses_.empty() && !(tp.timestamp > poses_.back().timestamp)) {
    raise(Errc::invalid_argument, "trajectory timestamps must strictly increase");
  }
  poses_.push_back(tp);
}

std::vector<Vec3> Trajectory::positions() const {
  std::vector<Vec3> out;
  out.reserve(poses_.size());
  for (const auto& tp : poses_) out.push_back(tp.pose.translation);
  return out;
}

Trajectory read_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open trajectory file: " + path);

  Trajectory traj;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("frame:");
      if (pos != std::string::npos) {
        std::string tag = line.substr(pos + 6);
        if (tag.find("metric") != std::string::npos) traj.set_frame(FrameId::metric);
      }
      continue;
    }
    double ts, tx, ty, tz, qx, qy, qz, qw;
    if (std::sscanf(line.c_str(), "%lf %lf %lf %lf %lf %lf %lf %lf", &ts, &tx, &ty, &tz,
                    &qx, &qy, &qz, &qw) != 8) {
      raise(Errc::io_error,
            path + ":" + std::to_string(lineno) + ": expected 'timestamp tx ty tz qx qy qz qw'");
    }
    TimedPose tp;
    tp.timestamp = ts;
    try {
      tp.pose.rotation = RotationSO3::from_quaternion_xyzw(qx, qy, qz, qw);
    } catch (const Error& e) {
      raise(Errc::io_error, path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    tp.pose.translation = {tx, ty, tz};
    if (!tp.pose.translation.finite() || !std::isfinite(ts)) {
      raise(Errc::io_error, path + ":" + std::to_string(lineno) + ": non-finite value");
    }
    try {
      traj.push_back(tp);
    } catch (const Error&) {
      raise(Errc::io_error,
            path + ":" + std::to_string(lineno) + ": timestamps must strictly increase");
    }
  }
  return traj;
}

void write_trajectory(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(Errc::io_error, "cannot write trajectory file: " + path);
  out << "# frame: " << frame_id_name(traj.frame()) << "\n";
  char buf[256];
  for (const auto& tp : traj) {
    auto q = tp.pose.rotation.quaternion_xyzw();
    const Vec3& t = tp.pose.translation;
    std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g %.9g %.9g %.9g %.9g %.9g\n", tp.timestamp,
                  t.x, t.y, t.z, q[0], q[1], q[2], q[3]);
    out << buf;
  }
  if (!out) raise(Errc::io_error, "write failed: " + path);
}

}  // namespace dropzone
