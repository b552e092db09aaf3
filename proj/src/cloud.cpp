#include "dropzone/cloud.hpp"

#include <cstdio>
#include <fstream>

namespace dropzone {

namespace {

void check_point(const LabeledPoint& p) {
  if (!p.position.finite()) raise(Errc::invalid_argument, "point position must be finite");
  if (p.class_id < 0) raise(Errc::invalid_argument, "class_id must be >= 0");
  if (!(p.confidence >= 0.0 && p.confidence <= 1.0)) {
    raise(Errc::invalid_argument, "confidence must lie in [0, 1]");
  }
}

}  // namespace

LabeledPointCloud::LabeledPointCloud(std::vector<LabeledPoint> points, FrameId frame)
    : points_(std::move(points)), frame_(frame) {
  for (const auto& p : points_) check_point(p);
}

void LabeledPointCloud::push_back(const LabeledPoint& p) {
  check_point(p);
  points_.push_back(p);
}

LabeledPointCloud read_cloud(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open cloud file: " + path);

  LabeledPointCloud cloud;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find("frame:") != std::string::npos &&
          line.find("metric") != std::string::npos) {
        cloud.set_frame(FrameId::metric);
      }
      continue;
    }
    double x, y, z, conf;
    int class_id;
    if (std::sscanf(line.c_str(), "%lf %lf %lf %d %lf", &x, &y, &z, &class_id, &conf) != 5) {
      raise(Errc::io_error,
            path + ":" + std::to_string(lineno) + ": expected 'x y z class_id confidence'");
    }
    try {
      cloud.push_back({{x, y, z}, class_id, conf});
    } catch (const Error& e) {
      raise(Errc::io_error, path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cloud;
}

void write_cloud(const LabeledPointCloud& cloud, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(Errc::io_error, "cannot write cloud file: " + path);
  out << "# frame: " << frame_id_name(cloud.frame()) << "\n";
  char buf[192];
  for (const auto& p : cloud) {
    std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g %d %.9g\n", p.position.x, p.position.y,
                  p.position.z, p.class_id, p.confidence);
    out << buf;
  }
  if (!out) raise(Errc::io_error, "write failed: " + path);
}

}  // namespace dropzone
