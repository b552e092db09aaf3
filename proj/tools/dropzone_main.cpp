// dropzone CLI: synthetic scenes, metric grounding, traversability mapping,
// deployment zone selection, and the trajectory / traversability evaluators.
// Built entirely on the C API from dropzone.h.
//
// Exit codes: 0 success, 1 domain error (error name on stderr), 2 usage.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "dropzone.h"

namespace {

int fail(int code) {
  std::cerr << dz_error_name(code) << ": " << dz_last_error() << "\n";
  return 1;
}

int fail_null() {
  // Handle-returning calls stash "<Name>: <message>" in the thread message.
  std::cerr << dz_last_error() << "\n";
  return 1;
}

struct ConfigHandle {
  dz_config* ptr = nullptr;
  ~ConfigHandle() { dz_config_free(ptr); }
};

int load_config(const std::string& path, ConfigHandle& cfg) {
  cfg.ptr = path.empty() ? dz_config_default() : dz_config_load(path.c_str());
  return cfg.ptr ? 0 : fail_null();
}

int cmd_synth(const std::string& scene, uint64_t seed, const std::string& params,
              const std::string& out_dir) {
  dz_scene* handle = dz_scene_synth(scene.c_str(), seed, params.empty() ? "" : params.c_str());
  if (!handle) return fail_null();
  int rc = dz_scene_write(handle, out_dir.c_str());
  if (rc != DZ_OK) {
    dz_scene_free(handle);
    return fail(rc);
  }
  double gx = 0.0, gy = 0.0;
  dz_scene_goal(handle, &gx, &gy);
  dz_scene_free(handle);
  std::printf("scene: %s\nseed: %llu\nout_dir: %s\ngoal: %.9g %.9g\n", scene.c_str(),
              static_cast<unsigned long long>(seed), out_dir.c_str(), gx, gy);
  return 0;
}

int cmd_ground(const std::string& traj_v_path, const std::string& traj_p_path,
               const std::string& cloud_path, const std::string& config_path,
               const std::string& out_dir) {
  ConfigHandle cfg;
  if (int rc = load_config(config_path, cfg)) return rc;

  dz_trajectory* traj_v = dz_trajectory_load(traj_v_path.c_str());
  if (!traj_v) return fail_null();
  dz_trajectory* traj_p = dz_trajectory_load(traj_p_path.c_str());
  if (!traj_p) {
    dz_trajectory_free(traj_v);
    return fail_null();
  }
  dz_cloud* cloud = nullptr;
  if (!cloud_path.empty()) {
    cloud = dz_cloud_load(cloud_path.c_str());
    if (!cloud) {
      dz_trajectory_free(traj_v);
      dz_trajectory_free(traj_p);
      return fail_null();
    }
  }

  dz_trajectory* grounded_traj = nullptr;
  dz_cloud* grounded_cloud = nullptr;
  dz_ground_report report{};
  int rc = dz_ground(traj_v, traj_p, cloud, cfg.ptr, &grounded_traj, &grounded_cloud, &report);
  dz_trajectory_free(traj_v);
  dz_trajectory_free(traj_p);
  dz_cloud_free(cloud);
  if (rc != DZ_OK) return fail(rc);

  std::filesystem::create_directories(out_dir);
  std::filesystem::path base(out_dir);
  rc = dz_trajectory_save(grounded_traj, (base / "grounded_traj.tum").string().c_str());
  if (rc == DZ_OK && grounded_cloud) {
    rc = dz_cloud_save(grounded_cloud, (base / "grounded_cloud.txt").string().c_str());
  }
  dz_trajectory_free(grounded_traj);
  dz_cloud_free(grounded_cloud);
  if (rc != DZ_OK) return fail(rc);

  std::ofstream out(base / "ground_report.txt");
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "scale: %.9g\n"
                "rot_quat: %.9g %.9g %.9g %.9g\n"
                "rot_angle_deg: %.9g\n"
                "translation: %.9g %.9g %.9g\n"
                "fit_residual: %.9g\n"
                "n_pairs: %llu\n"
                "n_poses: %llu\n",
                report.scale, report.rot_quat[0], report.rot_quat[1], report.rot_quat[2],
                report.rot_quat[3], report.rot_angle_deg, report.translation[0],
                report.translation[1], report.translation[2], report.fit_residual,
                static_cast<unsigned long long>(report.n_pairs),
                static_cast<unsigned long long>(report.n_poses));
  out << buf;
  out.close();
  std::fputs(buf, stdout);
  return 0;
}

int cmd_lift(const std::string& depth_dir, const std::string& poses, const std::string& masks_dir,
             double nms_iou, const std::string& out_path) {
  uint64_t skipped = 0;
  dz_cloud* cloud = dz_lift(depth_dir.c_str(), poses.c_str(), masks_dir.c_str(), nms_iou,
                            &skipped);
  if (!cloud) return fail_null();
  int rc = dz_cloud_save(cloud, out_path.c_str());
  size_t n = dz_cloud_size(cloud);
  dz_cloud_free(cloud);
  if (rc != DZ_OK) return fail(rc);
  std::printf("n_points: %zu\nskipped_pixels: %llu\nout: %s\n", n,
              static_cast<unsigned long long>(skipped), out_path.c_str());
  return 0;
}

int cmd_map(const std::string& cloud_path, const std::string& config_path,
            const std::vector<double>& origin, int ncols, int nrows,
            const std::string& out_dir) {
  ConfigHandle cfg;
  if (int rc = load_config(config_path, cfg)) return rc;
  dz_cloud* cloud = dz_cloud_load(cloud_path.c_str());
  if (!cloud) return fail_null();

  const double* origin_ptr = origin.size() == 2 ? origin.data() : nullptr;
  dz_mapset* maps = dz_build_maps(cloud, cfg.ptr, origin_ptr, ncols, nrows);
  dz_cloud_free(cloud);
  if (!maps) return fail_null();

  int rc = dz_mapset_write(maps, cfg.ptr, out_dir.c_str());
  uint64_t n_points = 0, n_dropped = 0;
  dz_mapset_stats(maps, &n_points, &n_dropped);
  dz_mapset_free(maps);
  if (rc != DZ_OK) return fail(rc);
  std::printf("n_points: %llu\nn_dropped: %llu\nout_dir: %s\n",
              static_cast<unsigned long long>(n_points),
              static_cast<unsigned long long>(n_dropped), out_dir.c_str());
  return 0;
}

int cmd_select(const std::string& map_path, std::vector<double> goal, int goal_class,
               const std::string& cloud_path, const std::string& config_path,
               const std::string& out_path) {
  ConfigHandle cfg;
  if (int rc = load_config(config_path, cfg)) return rc;

  // The goal defaults to the medoid of a designated target class when given
  // as --goal-class; explicit coordinates override.
  if (goal.empty()) {
    dz_cloud* cloud = dz_cloud_load(cloud_path.c_str());
    if (!cloud) return fail_null();
    dz_target target{};
    int rc = dz_extract_target(cloud, goal_class, 2000, 0, &target);
    dz_cloud_free(cloud);
    if (rc != DZ_OK) return fail(rc);
    goal = {target.position[0], target.position[1]};
    std::printf("goal from class %d %s: %.6g %.6g\n", goal_class, target.method, goal[0],
                goal[1]);
  }

  dz_raster* trav = dz_raster_load(map_path.c_str());
  if (!trav) return fail_null();

  dz_zones* zones = dz_select(trav, goal[0], goal[1], cfg.ptr);
  dz_raster_free(trav);
  if (!zones) return fail_null();

  int rc = dz_zones_save_csv(zones, out_path.c_str());
  if (rc != DZ_OK) {
    dz_zones_free(zones);
    return fail(rc);
  }
  size_t count = dz_zones_count(zones);
  for (size_t i = 0; i < count; ++i) {
    dz_zone z{};
    dz_zones_get(zones, i, &z);
    std::printf("rank %d: cell (%d, %d) at (%.6g, %.6g) T=%.6g d=%.6g objective=%.6g\n", z.rank,
                z.row, z.col, z.x, z.y, z.score_t, z.goal_distance, z.objective);
  }
  dz_zones_free(zones);
  std::printf("zones: %zu\nout: %s\n", count, out_path.c_str());
  return 0;
}

int cmd_eval_traj(const std::string& gt_path, const std::string& est_path, int delta,
                  const std::string& out_path) {
  dz_trajectory* gt = dz_trajectory_load(gt_path.c_str());
  if (!gt) return fail_null();
  dz_trajectory* est = dz_trajectory_load(est_path.c_str());
  if (!est) {
    dz_trajectory_free(gt);
    return fail_null();
  }
  dz_traj_metrics m{};
  int rc = dz_eval_traj(gt, est, delta, &m);
  dz_trajectory_free(gt);
  dz_trajectory_free(est);
  if (rc != DZ_OK) return fail(rc);

  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "# conventions: ate = position rmse after sim3 alignment; rpe over index gap "
                "delta=%d; est translations scale-corrected; rotation errors in degrees\n"
                "ate_rmse: %.6f\n"
                "rpe_trans_rmse: %.6f\n"
                "rpe_rot_rmse_deg: %.6f\n"
                "n_poses: %llu\n"
                "n_dropped: %llu\n",
                delta, m.ate_rmse, m.rpe_trans_rmse, m.rpe_rot_rmse_deg,
                static_cast<unsigned long long>(m.n_poses),
                static_cast<unsigned long long>(m.n_dropped));
  std::fputs(buf, stdout);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << buf;
  }
  return 0;
}

int cmd_eval_trav(const std::string& pred_path, const std::string& gt_path,
                  const std::string& out_path) {
  dz_raster* pred = dz_raster_load(pred_path.c_str());
  if (!pred) return fail_null();
  dz_raster* gt = dz_raster_load(gt_path.c_str());
  if (!gt) {
    dz_raster_free(pred);
    return fail_null();
  }
  dz_trav_metrics m{};
  int rc = dz_eval_trav(pred, gt, &m);
  dz_raster_free(pred);
  dz_raster_free(gt);
  if (rc != DZ_OK) return fail(rc);

  char auc[32];
  if (m.roc_auc_defined) {
    std::snprintf(auc, sizeof(auc), "%.6f", m.roc_auc);
  } else {
    std::snprintf(auc, sizeof(auc), "nan");
  }
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "# binary predictions thresholded at T >= 0.5\n"
                "macc: %.6f\naacc: %.6f\nroc_auc: %s\nmse: %.6f\nn_cells: %llu\n", m.macc,
                m.aacc, auc, m.mse, static_cast<unsigned long long>(m.n_cells));
  std::fputs(buf, stdout);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << buf;
  }
  return 0;
}

int cmd_render(const std::string& raster_path, const std::string& out_path) {
  dz_raster* raster = dz_raster_load(raster_path.c_str());
  if (!raster) return fail_null();
  int rc = dz_render_ppm(raster, out_path.c_str());
  dz_raster_free(raster);
  if (rc != DZ_OK) return fail(rc);
  std::printf("out: %s\n", out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aerial-to-ground deployment mapping toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dz_version()));

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic scene bundle");
  std::string synth_scene, synth_params, synth_out;
  uint64_t synth_seed = 0;
  synth->add_option("--scene", synth_scene,
                    "scene name: incline, step, culvert, rockfield, smoothed-rocks")
      ->required();
  synth->add_option("--seed", synth_seed, "random seed (default 0)");
  synth->add_option("--params", synth_params, "key=value[,key=value] scene parameters");
  synth->add_option("--out-dir", synth_out, "output directory")->required();

  // ground
  auto* ground = app.add_subcommand("ground", "metrically ground a trajectory and cloud");
  std::string g_traj_v, g_traj_p, g_cloud, g_config, g_out;
  ground->add_option("--traj-v", g_traj_v, "predicted (reconstruction-frame) trajectory")
      ->required();
  ground->add_option("--traj-p", g_traj_p, "platform (metric) trajectory")->required();
  ground->add_option("--cloud", g_cloud, "labeled cloud to ground (optional)");
  ground->add_option("--config", g_config, "config file (defaults apply when omitted)");
  ground->add_option("--out-dir", g_out, "output directory")->required();

  // lift
  auto* lift = app.add_subcommand("lift", "lift depth + masks into a labeled cloud");
  std::string l_depth, l_poses, l_masks, l_out;
  double l_nms = -1.0;
  lift->add_option("--depth-dir", l_depth, "directory of frame*.depth rasters")->required();
  lift->add_option("--poses", l_poses, "pose file, one line per frame")->required();
  lift->add_option("--masks-dir", l_masks, "directory of instance mask PGMs")->required();
  lift->add_option("--nms-iou", l_nms, "per-frame mask suppression IoU threshold (off by default)");
  lift->add_option("--out", l_out, "output cloud file")->required();

  // map
  auto* map_cmd = app.add_subcommand("map", "build BEV, feature, and traversability rasters");
  std::string m_cloud, m_config, m_out;
  std::vector<double> m_origin;
  int m_ncols = 0, m_nrows = 0;
  map_cmd->add_option("--cloud", m_cloud, "labeled cloud (metric frame)")->required();
  map_cmd->add_option("--config", m_config, "config file");
  map_cmd->add_option("--origin", m_origin, "explicit grid origin: x y")->expected(2);
  map_cmd->add_option("--ncols", m_ncols, "explicit grid columns");
  map_cmd->add_option("--nrows", m_nrows, "explicit grid rows");
  map_cmd->add_option("--out-dir", m_out, "output directory")->required();

  // select
  auto* select = app.add_subcommand("select", "select ranked reachable deployment zones");
  std::string s_map, s_config, s_out, s_cloud;
  std::vector<double> s_goal;
  int s_goal_class = -1;
  select->add_option("--map", s_map, "traversability raster (.asc)")->required();
  auto* goal_opt = select->add_option("--goal", s_goal, "goal coordinates: x y")->expected(2);
  auto* goal_class_opt =
      select->add_option("--goal-class", s_goal_class,
                         "take the goal from this class's medoid (needs --cloud)");
  select->add_option("--cloud", s_cloud, "labeled cloud for --goal-class");
  goal_opt->excludes(goal_class_opt);
  goal_class_opt->needs(select->get_option("--cloud"));
  select->add_option("--config", s_config, "config file");
  select->add_option("--out", s_out, "zones.csv output path")->required();

  // eval-traj
  auto* eval_traj = app.add_subcommand("eval-traj", "ATE / RPE trajectory evaluation");
  std::string et_gt, et_est, et_out;
  int et_delta = 1;
  eval_traj->add_option("--gt", et_gt, "ground-truth trajectory")->required();
  eval_traj->add_option("--est", et_est, "estimated trajectory")->required();
  eval_traj->add_option("--delta", et_delta, "RPE index gap (default 1)");
  eval_traj->add_option("--out", et_out, "also write the report to this file");

  // eval-trav
  auto* eval_trav = app.add_subcommand("eval-trav", "traversability metrics against ground truth");
  std::string ev_pred, ev_gt, ev_out;
  eval_trav->add_option("--pred", ev_pred, "predicted traversability raster")->required();
  eval_trav->add_option("--gt", ev_gt, "binary ground-truth raster")->required();
  eval_trav->add_option("--out", ev_out, "also write the report to this file");

  // render
  auto* render = app.add_subcommand("render", "render a [0,1] raster as a PPM heatmap");
  std::string r_raster, r_out;
  render->add_option("--raster", r_raster, "input raster (.asc)")->required();
  render->add_option("--out", r_out, "output .ppm path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  if (synth->parsed()) return cmd_synth(synth_scene, synth_seed, synth_params, synth_out);
  if (ground->parsed()) return cmd_ground(g_traj_v, g_traj_p, g_cloud, g_config, g_out);
  if (lift->parsed()) return cmd_lift(l_depth, l_poses, l_masks, l_nms, l_out);
  if (map_cmd->parsed()) return cmd_map(m_cloud, m_config, m_origin, m_ncols, m_nrows, m_out);
  if (select->parsed()) {
    if (s_goal.empty() && s_goal_class < 0) {
      std::cerr << "select needs either --goal or --goal-class\n";
      return 2;
    }
    return cmd_select(s_map, s_goal, s_goal_class, s_cloud, s_config, s_out);
  }
  if (eval_traj->parsed()) return cmd_eval_traj(et_gt, et_est, et_delta, et_out);
  if (eval_trav->parsed()) return cmd_eval_trav(ev_pred, ev_gt, ev_out);
  if (render->parsed()) return cmd_render(r_raster, r_out);
  return 2;
}
