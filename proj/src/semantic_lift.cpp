#include "dropzone/semantic_lift.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>

#include "dropzone/rng.hpp"
#include "dropzone/trajectory.hpp"

namespace dropzone {

namespace fs = std::filesystem;

Vec3 DepthFrame::camera_center() const {
  return rotation.transposed() * translation * -1.0;
}

void DepthFrame::validate() const {
  if (width < 1 || height < 1) raise(Errc::invalid_argument, "depth frame has empty dimensions");
  if (depth.size() != static_cast<std::size_t>(width) * height) {
    raise(Errc::invalid_argument, "depth buffer does not match frame dimensions");
  }
  if (!(fx > 0.0) || !(fy > 0.0)) raise(Errc::invalid_argument, "focal lengths must be positive");
  if (!confidence.empty() && confidence.size() != depth.size()) {
    raise(Errc::invalid_argument, "confidence buffer does not match frame dimensions");
  }
}

std::size_t InstanceMask::area() const {
  std::size_t n = 0;
  for (float s : scores) {
    if (s > 0.0f) ++n;
  }
  return n;
}

UnprojectResult unproject(const DepthFrame& frame) {
  frame.validate();
  UnprojectResult result;
  result.points.reserve(frame.depth.size());

  const Eigen::Matrix3d r_inv = frame.rotation.matrix().transpose();
  const Eigen::Vector3d t = frame.translation.eigen();

  for (int v = 0; v < frame.height; ++v) {
    for (int u = 0; u < frame.width; ++u) {
      if (!frame.valid_depth(u, v)) {
        ++result.skipped;
        continue;
      }
      const double d = frame.depth_at(u, v);
      // x_cam = K^-1 [u, v, 1]^T * d
      Eigen::Vector3d x_cam((u - frame.cx) / frame.fx * d, (v - frame.cy) / frame.fy * d, d);
      Eigen::Vector3d x_world = r_inv * (x_cam - t);
      result.points.push_back({u, v, Vec3(x_world)});
    }
  }
  return result;
}

double mask_iou(const InstanceMask& a, const InstanceMask& b) {
  if (a.width != b.width || a.height != b.height) {
    raise(Errc::invalid_argument, "mask dimensions differ");
  }
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.scores.size(); ++i) {
    bool pa = a.scores[i] > 0.0f;
    bool pb = b.scores[i] > 0.0f;
    inter += (pa && pb) ? 1 : 0;
    uni += (pa || pb) ? 1 : 0;
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<InstanceMask> mask_nms(std::vector<InstanceMask> masks, double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    raise(Errc::invalid_argument, "iou_threshold must lie in (0, 1]");
  }
  std::sort(masks.begin(), masks.end(), [](const InstanceMask& a, const InstanceMask& b) {
    if (a.quality != b.quality) return a.quality > b.quality;
    return a.instance_id < b.instance_id;
  });

  std::vector<InstanceMask> retained;
  for (auto& m : masks) {
    bool suppressed = false;
    for (const auto& kept : retained) {
      if (mask_iou(m, kept) >= iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) retained.push_back(std::move(m));
  }
  return retained;
}

double uncovered_ratio(const std::vector<InstanceMask>& masks, int width, int height) {
  if (width < 1 || height < 1) raise(Errc::invalid_argument, "frame dimensions must be positive");
  const std::size_t n_pixels = static_cast<std::size_t>(width) * height;
  std::vector<uint8_t> covered(n_pixels, 0);
  for (const auto& m : masks) {
    if (m.width != width || m.height != height) {
      raise(Errc::invalid_argument, "mask dimensions do not match frame");
    }
    for (std::size_t i = 0; i < n_pixels; ++i) {
      if (m.scores[i] > 0.0f) covered[i] = 1;
    }
  }
  std::size_t n_covered = std::accumulate(covered.begin(), covered.end(), std::size_t{0});
  return 1.0 - static_cast<double>(n_covered) / static_cast<double>(n_pixels);
}

bool keyframe_trigger(double rho_t, double rho_ref, double delta) {
  if (!(delta > 0.0)) raise(Errc::invalid_argument, "delta must be positive");
  return rho_t - rho_ref > delta;
}

LabeledPointCloud assign_labels(const DepthFrame& frame, const std::vector<InstanceMask>& masks) {
  for (const auto& m : masks) {
    if (m.width != frame.width || m.height != frame.height) {
      raise(Errc::invalid_argument, "mask dimensions do not match frame");
    }
  }
  // Stable visiting order so score ties resolve to the lowest instance id.
  std::vector<const InstanceMask*> ordered;
  ordered.reserve(masks.size());
  for (const auto& m : masks) ordered.push_back(&m);
  std::sort(ordered.begin(), ordered.end(),
            [](const InstanceMask* a, const InstanceMask* b) {
              return a->instance_id < b->instance_id;
            });

  UnprojectResult unprojected = unproject(frame);
  LabeledPointCloud cloud;
  cloud.reserve(unprojected.points.size());
  for (const auto& up : unprojected.points) {
    float best_score = 0.0f;
    const InstanceMask* best = nullptr;
    for (const InstanceMask* m : ordered) {
      float s = m->score_at(up.u, up.v);
      if (s > best_score) {  // strict: earlier (lower id) wins ties
        best_score = s;
        best = m;
      }
    }
    LabeledPoint p;
    p.position = up.position;
    if (best != nullptr) {
      p.class_id = best->class_id;
      p.confidence = best->quality;
      if (!frame.confidence.empty()) {
        p.confidence *= frame.confidence[static_cast<std::size_t>(up.v) * frame.width + up.u];
      }
      p.confidence = std::clamp(p.confidence, 0.0, 1.0);
    }
    cloud.push_back(p);
  }
  return cloud;
}

const char* target_method_name(TargetMethod m) {
  switch (m) {
    case TargetMethod::medoid:
      return "medoid";
    case TargetMethod::sampled_medoid:
      return "sampled-medoid";
    case TargetMethod::centroid:
      return "centroid";
  }
  return "unknown";
}

namespace {

std::size_t medoid_index(const std::vector<Vec3>& pts) {
  std::size_t best = 0;
  double best_sum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j) sum += distance(pts[i], pts[j]);
    if (sum < best_sum) {
      best_sum = sum;
      best = i;
    }
  }
  return best;
}

}  // namespace

SemanticTarget extract_target(const LabeledPointCloud& cloud, int class_id,
                              const TargetOptions& options) {
  std::vector<Vec3> pts;
  double conf_sum = 0.0;
  for (const auto& p : cloud) {
    if (p.class_id == class_id) {
      pts.push_back(p.position);
      conf_sum += p.confidence;
    }
  }
  if (pts.empty()) {
    raise(Errc::class_absent, "no points of class " + std::to_string(class_id));
  }

  SemanticTarget target;
  target.class_id = class_id;
  target.point_count = pts.size();
  target.confidence = conf_sum / static_cast<double>(pts.size());

  if (options.medoid_cap == 0) {
    Vec3 c;
    for (const auto& p : pts) c = c + p;
    target.representative = c * (1.0 / static_cast<double>(pts.size()));
    target.method = TargetMethod::centroid;
  } else if (pts.size() <= options.medoid_cap) {
    target.representative = pts[medoid_index(pts)];
    target.method = TargetMethod::medoid;
  } else {
    // Uniform subsample without replacement (partial Fisher-Yates), seeded.
    SplitMix64 rng(options.seed);
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < options.medoid_cap; ++i) {
      std::size_t j = i + rng.next_below(idx.size() - i);
      std::swap(idx[i], idx[j]);
    }
    std::vector<Vec3> sample;
    sample.reserve(options.medoid_cap);
    for (std::size_t i = 0; i < options.medoid_cap; ++i) sample.push_back(pts[idx[i]]);
    target.representative = sample[medoid_index(sample)];
    target.method = TargetMethod::sampled_medoid;
  }
  return target;
}

DepthFrame read_depth_raster(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open depth file: " + path);

  std::string header;
  if (!std::getline(in, header)) raise(Errc::io_error, path + ": missing header");
  DepthFrame frame;
  if (std::sscanf(header.c_str(), "DEPTH %d %d %lf %lf %lf %lf", &frame.width, &frame.height,
                  &frame.fx, &frame.fy, &frame.cx, &frame.cy) != 6) {
    raise(Errc::io_error, path + ": expected header 'DEPTH <W> <H> fx fy cx cy'");
  }
  if (frame.width < 1 || frame.height < 1) raise(Errc::io_error, path + ": bad dimensions");

  const std::size_t n = static_cast<std::size_t>(frame.width) * frame.height;
  frame.depth.resize(n);
  in.read(reinterpret_cast<char*>(frame.depth.data()),
          static_cast<std::streamsize>(n * sizeof(float)));
  if (static_cast<std::size_t>(in.gcount()) != n * sizeof(float)) {
    raise(Errc::io_error, path + ": truncated depth data");
  }
  return frame;
}

void write_depth_raster(const DepthFrame& frame, const std::string& path) {
  frame.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::io_error, "cannot write depth file: " + path);
  char header[160];
  std::snprintf(header, sizeof(header), "DEPTH %d %d %.9g %.9g %.9g %.9g\n", frame.width,
                frame.height, frame.fx, frame.fy, frame.cx, frame.cy);
  out << header;
  out.write(reinterpret_cast<const char*>(frame.depth.data()),
            static_cast<std::streamsize>(frame.depth.size() * sizeof(float)));
  if (!out) raise(Errc::io_error, "write failed: " + path);
}

std::string mask_filename(int frame_index, int instance_id, int class_id) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "frame%05d_inst%04d_class%d.pgm", frame_index, instance_id,
                class_id);
  return buf;
}

InstanceMask read_mask_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open mask file: " + path);

  InstanceMask mask;
  int inst = 0, cls = 0;
  // Identity comes from the filename.
  std::string stem = fs::path(path).filename().string();
  if (std::sscanf(stem.c_str(), "frame%*d_inst%d_class%d.pgm", &inst, &cls) == 2) {
    mask.instance_id = inst;
    mask.class_id = cls;
  }

  std::string magic;
  in >> magic;
  if (magic != "P5") raise(Errc::io_error, path + ": not a binary PGM (P5)");

  // Header tokens with '#' comments; a `# quality <q>` comment carries the
  // mask quality.
  int fields[3];
  int have = 0;
  while (have < 3) {
    int c = in.peek();
    if (c == EOF) raise(Errc::io_error, path + ": truncated PGM header");
    if (std::isspace(c)) {
      in.get();
      continue;
    }
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
      double q;
      if (std::sscanf(comment.c_str(), "# quality %lf", &q) == 1) {
        mask.quality = std::clamp(q, 0.0, 1.0);
      }
      continue;
    }
    if (!(in >> fields[have])) raise(Errc::io_error, path + ": truncated PGM header");
    ++have;
  }
  mask.width = fields[0];
  mask.height = fields[1];
  const int maxval = fields[2];
  if (mask.width < 1 || mask.height < 1 || maxval < 1 || maxval > 255) {
    raise(Errc::io_error, path + ": unsupported PGM geometry");
  }
  in.get();  // single whitespace after maxval

  const std::size_t n = static_cast<std::size_t>(mask.width) * mask.height;
  std::vector<uint8_t> raw(n);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    raise(Errc::io_error, path + ": truncated PGM data");
  }
  mask.scores.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    mask.scores[i] = static_cast<float>(raw[i]) / static_cast<float>(maxval);
  }
  return mask;
}

void write_mask_pgm(const InstanceMask& mask, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::io_error, "cannot write mask file: " + path);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", mask.quality);
  out << "P5\n# quality " << buf << "\n" << mask.width << " " << mask.height << "\n255\n";
  std::vector<uint8_t> raw(mask.scores.size());
  for (std::size_t i = 0; i < mask.scores.size(); ++i) {
    float s = std::clamp(mask.scores[i], 0.0f, 1.0f);
    raw[i] = static_cast<uint8_t>(std::lround(s * 255.0f));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) raise(Errc::io_error, "write failed: " + path);
}

LabeledPointCloud lift_directory(const std::string& depth_dir, const std::string& poses_path,
                                 const std::string& masks_dir, const LiftOptions& options,
                                 std::size_t* skipped_pixels) {
  // Collect depth frames by index.
  std::map<int, fs::path> depth_files;
  for (const auto& entry : fs::directory_iterator(depth_dir)) {
    int t;
    std::string name = entry.path().filename().string();
    if (std::sscanf(name.c_str(), "frame%d.depth", &t) == 1 && name.ends_with(".depth")) {
      depth_files[t] = entry.path();
    }
  }
  if (depth_files.empty()) raise(Errc::io_error, "no frame*.depth files under " + depth_dir);

  Trajectory poses = read_trajectory(poses_path);
  if (poses.size() != depth_files.size()) {
    raise(Errc::length_mismatch, "pose count (" + std::to_string(poses.size()) +
                                     ") does not match depth frame count (" +
                                     std::to_string(depth_files.size()) + ")");
  }

  // Group masks by frame index.
  std::map<int, std::vector<fs::path>> mask_files;
  for (const auto& entry : fs::directory_iterator(masks_dir)) {
    int t, inst, cls;
    std::string name = entry.path().filename().string();
    if (std::sscanf(name.c_str(), "frame%d_inst%d_class%d.pgm", &t, &inst, &cls) == 3) {
      mask_files[t].push_back(entry.path());
    }
  }
  for (auto& [t, files] : mask_files) std::sort(files.begin(), files.end());

  LabeledPointCloud cloud;
  std::size_t skipped = 0;
  std::size_t frame_seq = 0;
  for (const auto& [t, depth_path] : depth_files) {
    DepthFrame frame = read_depth_raster(depth_path.string());
    const PoseSE3& pose = poses[frame_seq++].pose;
    frame.rotation = pose.rotation;
    frame.translation = pose.translation;

    fs::path conf_path = depth_path;
    conf_path.replace_extension(".conf");
    if (fs::exists(conf_path)) {
      DepthFrame conf = read_depth_raster(conf_path.string());
      if (conf.width != frame.width || conf.height != frame.height) {
        raise(Errc::io_error, conf_path.string() + ": confidence dimensions mismatch");
      }
      frame.confidence = std::move(conf.depth);
    }

    std::vector<InstanceMask> masks;
    auto it = mask_files.find(t);
    if (it != mask_files.end()) {
      for (const auto& mp : it->second) masks.push_back(read_mask_pgm(mp.string()));
    }
    if (options.nms_iou > 0.0) masks = mask_nms(std::move(masks), options.nms_iou);

    LabeledPointCloud frame_cloud = assign_labels(frame, masks);
    skipped += static_cast<std::size_t>(frame.width) * frame.height - frame_cloud.size();
    for (const auto& p : frame_cloud) cloud.push_back(p);
  }
  if (skipped_pixels) *skipped_pixels = skipped;
  return cloud;
}

}  // namespace dropzone
