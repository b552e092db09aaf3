#include "dropzone/synth.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "dropzone/rng.hpp"

namespace dropzone {

namespace {

// Scene region: [0, 16) x [0, 16) meters, 64x64 cells at 0.25 m.
constexpr double kResolution = 0.25;
constexpr int kCells = 64;
constexpr int kPointPairsPerCell = 2;  // antithetic pairs, 4 points per cell
constexpr double kHeightNoise = 0.004;

struct Sample {
  double z = 0.0;
  int class_id = classes::kGrass;
};

struct Rock {
  double cx, cy, r, h;
};

double rock_bump(const std::vector<Rock>& rocks, double x, double y, double height_factor) {
  double z = 0.0;
  for (const auto& rock : rocks) {
    double d2 = (x - rock.cx) * (x - rock.cx) + (y - rock.cy) * (y - rock.cy);
    double r2 = rock.r * rock.r;
    if (d2 < r2) z = std::max(z, rock.h * height_factor * (1.0 - d2 / r2));
  }
  return z;
}

bool in_rock(const std::vector<Rock>& rocks, double x, double y) {
  for (const auto& rock : rocks) {
    double d2 = (x - rock.cx) * (x - rock.cx) + (y - rock.cy) * (y - rock.cy);
    if (d2 < rock.r * rock.r) return true;
  }
  return false;
}

// Reconstruction confidence tracks viewing geometry, not terrain class;
// keeping ground classes at one base stops confidence from leaking label
// information into the geometric-only maps.
double confidence_base(int class_id) {
  return class_id == classes::kStructure ? 0.80 : 0.90;
}

// Culvert layout: a grass approach corridor between two rocky embankment
// bands, capped by a structure wall that stands in for the culvert face.
bool culvert_band(double x, double y) {
  return y >= 3.0 && y < 14.0 && ((x >= 4.0 && x < 6.0) || (x >= 10.0 && x < 12.0));
}
bool culvert_wall(double y) { return y >= 14.0; }

}  // namespace

SceneParams parse_scene_params(const std::string& text) {
  SceneParams params;
  if (text.empty()) return params;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      raise(Errc::config_invalid, "scene params expect key=value, got '" + item + "'");
    }
    std::string key = item.substr(0, eq);
    double value;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      raise(Errc::config_invalid, "bad scene param value in '" + item + "'");
    }
    if (key == "theta_deg") {
      params.theta_deg = value;
    } else if (key == "n_rocks") {
      params.n_rocks = static_cast<int>(value);
    } else if (key == "step_height") {
      params.step_height = value;
    } else {
      raise(Errc::config_invalid, "unknown scene param '" + key + "'");
    }
  }
  return params;
}

SceneBundle synth_scene(const std::string& name, uint64_t seed, const SceneParams& params) {
  bool is_incline = name == "incline";
  bool is_step = name == "step";
  bool is_culvert = name == "culvert";
  bool is_rockfield = name == "rockfield";
  bool is_smoothed = name == "smoothed-rocks";
  if (!(is_incline || is_step || is_culvert || is_rockfield || is_smoothed)) {
    raise(Errc::unknown_scene, "unknown scene '" + name + "'");
  }

  SplitMix64 rng(seed);
  SceneBundle bundle;
  bundle.scene = name;
  bundle.seed = seed;
  bundle.params = params;
  bundle.grid = {0.0, 0.0, kResolution, kCells, kCells};

  // 1. Episode length, then the hidden similarity.
  const int n_poses = 30 + static_cast<int>(rng.next_below(51));
  Sim3Transform gt;
  gt.scale = std::exp(rng.uniform(std::log(0.5), std::log(2.5)));
  {
    double qa = rng.gaussian(), qb = rng.gaussian(), qc = rng.gaussian(), qd = rng.gaussian();
    double n = std::sqrt(qa * qa + qb * qb + qc * qc + qd * qd);
    gt.rotation = RotationSO3::from_quaternion_xyzw(qa / n, qb / n, qc / n, qd / n);
  }
  gt.translation = {rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
  bundle.gt_sim3 = gt;
  const Sim3Transform gt_inv = gt.inverse();

  // 2. Hover trajectory in the metric frame: slow lissajous orbit over the
  //    region center with jitter, camera looking straight down.
  const double phi1 = rng.uniform(0.0, 2.0 * M_PI);
  const double phi2 = rng.uniform(0.0, 2.0 * M_PI);
  const double phi3 = rng.uniform(0.0, 2.0 * M_PI);
  Eigen::Matrix3d down;
  down << 1, 0, 0, 0, -1, 0, 0, 0, -1;  // camera z axis points at the ground
  const RotationSO3 look_down = RotationSO3::from_matrix(down);

  Trajectory traj_metric;
  for (int i = 0; i < n_poses; ++i) {
    TimedPose tp;
    tp.timestamp = 0.1 * i;
    tp.pose.translation = {8.0 + 3.0 * std::sin(0.35 * i + phi1) + 0.05 * rng.gaussian(),
                           8.0 + 3.0 * std::cos(0.23 * i + phi2) + 0.05 * rng.gaussian(),
                           14.0 + 1.5 * std::sin(0.11 * i + phi3) + 0.05 * rng.gaussian()};
    tp.pose.rotation = RotationSO3::rot_z(rng.uniform(-0.1, 0.1)) * look_down;
    traj_metric.push_back(tp);
  }

  // 3. Scene-specific terrain and labels.
  std::vector<Rock> rocks;
  if (is_rockfield || is_smoothed) {
    for (int i = 0; i < params.n_rocks; ++i) {
      rocks.push_back({rng.uniform(2.0, 14.0), rng.uniform(2.0, 14.0), rng.uniform(0.4, 0.9),
                       rng.uniform(0.25, 0.6)});
    }
  }
  const double tan_theta = std::tan(params.theta_deg * M_PI / 180.0);
  // smoothed-rocks keeps the rock labels but flattens the bumps to the level
  // of the sampling noise, so geometry alone can barely see them.
  const double rock_height_factor = is_smoothed ? 0.02 : 1.0;

  auto sample_terrain = [&](double x, double y) -> Sample {
    if (is_incline) return {x * tan_theta, classes::kGrass};
    if (is_step) return {x < 8.0 ? 0.0 : params.step_height, classes::kGrass};
    if (is_culvert) {
      if (culvert_wall(y)) return {1.2, classes::kStructure};
      if (culvert_band(x, y)) {
        double z = 0.35 * (1.0 + 0.5 * std::sin(2.3 * x) * std::sin(1.7 * y));
        return {z, classes::kRock};
      }
      return {0.0, classes::kGrass};
    }
    // rockfield / smoothed-rocks
    if (in_rock(rocks, x, y)) {
      return {rock_bump(rocks, x, y, rock_height_factor), classes::kRock};
    }
    return {0.0, classes::kGrass};
  };

  // 4. Sample the surface and push each point through the inverse similarity
  //    into the reconstruction frame. Points come in antithetic pairs
  //    mirrored about the cell center, so per-cell mean positions are
  //    unbiased and planar scenes keep exact cell-mean heights.
  LabeledPointCloud cloud;
  cloud.reserve(static_cast<std::size_t>(kCells) * kCells * kPointPairsPerCell * 2);
  auto emit_point = [&](double x, double y) {
    Sample s = sample_terrain(x, y);
    double z = s.z + kHeightNoise * rng.gaussian();
    double conf = std::clamp(confidence_base(s.class_id) + rng.uniform(-0.04, 0.04), 0.0, 1.0);
    cloud.push_back({apply_sim3_point(gt_inv, {x, y, z}), s.class_id, conf});
  };
  for (int row = 0; row < kCells; ++row) {
    for (int col = 0; col < kCells; ++col) {
      for (int j = 0; j < kPointPairsPerCell; ++j) {
        double u = rng.next_double();
        double v = rng.next_double();
        emit_point((col + u) * kResolution, (row + v) * kResolution);
        emit_point((col + (1.0 - u)) * kResolution, (row + (1.0 - v)) * kResolution);
      }
    }
  }
  bundle.cloud = std::move(cloud);

  // 5. traj_v via the inverse, then traj_p re-derived with the forward
  //    transform so traj_p == gt_sim3(traj_v) holds exactly.
  for (const auto& tp : traj_metric) {
    bundle.traj_v.push_back({tp.timestamp, apply_sim3_pose(gt_inv, tp.pose)});
  }
  for (const auto& tp : bundle.traj_v) {
    bundle.traj_p.push_back({tp.timestamp, apply_sim3_pose(gt, tp.pose)});
  }
  bundle.traj_p.set_frame(FrameId::metric);

  // 6. Analytic ground-truth traversability at cell centers.
  bundle.gt_trav = Raster(bundle.grid);
  for (int row = 0; row < kCells; ++row) {
    for (int col = 0; col < kCells; ++col) {
      auto [x, y] = bundle.grid.cell_center(row, col);
      bool hazard = false;
      if (is_step) {
        hazard = std::abs(x - 8.0) <= 0.75;
      } else if (is_culvert) {
        hazard = culvert_band(x, y) || culvert_wall(y);
      } else if (is_rockfield || is_smoothed) {
        hazard = in_rock(rocks, x, y);
      }
      bundle.gt_trav.at(row, col) = hazard ? 0.0 : 1.0;
    }
  }

  // The culvert goal sits on the corridor in front of the face, far enough
  // that the wall's height jump does not bleed into its feature windows.
  bundle.goal_x = 8.0;
  bundle.goal_y = is_culvert ? 12.0 : 8.0;

  // 7. Provenance record.
  {
    std::ostringstream m;
    char buf[256];
    m << "scene: " << name << "\n";
    m << "seed: " << seed << "\n";
    m << "prng: splitmix64\n";
    std::snprintf(buf, sizeof(buf), "params: theta_deg=%.9g n_rocks=%d step_height=%.9g\n",
                  params.theta_deg, params.n_rocks, params.step_height);
    m << buf;
    m << "n_poses: " << n_poses << "\n";
    m << "n_points: " << bundle.cloud.size() << "\n";
    std::snprintf(buf, sizeof(buf), "grid: origin %.9g %.9g cells %dx%d resolution %.9g\n",
                  bundle.grid.origin_x, bundle.grid.origin_y, bundle.grid.ncols,
                  bundle.grid.nrows, bundle.grid.resolution);
    m << buf;
    std::snprintf(buf, sizeof(buf), "goal_x: %.9g\ngoal_y: %.9g\n", bundle.goal_x, bundle.goal_y);
    m << buf;
    auto q = gt.rotation.quaternion_xyzw();
    std::snprintf(buf, sizeof(buf), "gt_scale: %.9g\ngt_quat: %.9g %.9g %.9g %.9g\n", gt.scale,
                  q[0], q[1], q[2], q[3]);
    m << buf;
    std::snprintf(buf, sizeof(buf), "gt_translation: %.9g %.9g %.9g\n", gt.translation.x,
                  gt.translation.y, gt.translation.z);
    m << buf;
    bundle.manifest = m.str();
  }
  return bundle;
}

void write_scene(const SceneBundle& bundle, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::filesystem::path base(dir);
  write_trajectory(bundle.traj_v, (base / "traj_v.tum").string());
  write_trajectory(bundle.traj_p, (base / "traj_p.tum").string());
  write_cloud(bundle.cloud, (base / "cloud.txt").string());
  write_esri_grid(bundle.gt_trav, (base / "gt_trav.asc").string(), /*integer_values=*/true);
  std::ofstream manifest(base / "manifest.txt");
  if (!manifest) raise(Errc::io_error, "cannot write manifest under " + dir);
  manifest << bundle.manifest;
}

}  // namespace dropzone
