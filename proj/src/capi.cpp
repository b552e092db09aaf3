#include "dropzone.h"

#include <cmath>
#include <cstring>
#include <string>

#include "dropzone/cloud.hpp"
#include "dropzone/config.hpp"
#include "dropzone/deployment.hpp"
#include "dropzone/grounding.hpp"
#include "dropzone/pipeline.hpp"
#include "dropzone/raster.hpp"
#include "dropzone/render.hpp"
#include "dropzone/semantic_lift.hpp"
#include "dropzone/synth.hpp"
#include "dropzone/trajectory.hpp"
#include "dropzone/trajectory_metrics.hpp"

/* Opaque handle definitions: thin wrappers over the C++ core types. */
struct dz_config {
  dropzone::RunConfig value;
};
struct dz_trajectory {
  dropzone::Trajectory value;
};
struct dz_cloud {
  dropzone::LabeledPointCloud value;
};
struct dz_raster {
  dropzone::Raster value;
};
struct dz_mapset {
  dropzone::MapSet value;
};
struct dz_zones {
  std::vector<dropzone::DeploymentCandidate> value;
};
struct dz_scene {
  dropzone::SceneBundle value;
};

namespace {

thread_local std::string g_last_error;

int code_of(dropzone::Errc c) {
  using dropzone::Errc;
  switch (c) {
    case Errc::length_mismatch:
      return DZ_ERR_LENGTH_MISMATCH;
    case Errc::too_short:
      return DZ_ERR_TOO_SHORT;
    case Errc::degenerate_motion:
      return DZ_ERR_DEGENERATE_MOTION;
    case Errc::insufficient_pairs:
      return DZ_ERR_INSUFFICIENT_PAIRS;
    case Errc::empty_trajectory:
      return DZ_ERR_EMPTY_TRAJECTORY;
    case Errc::empty_cloud:
      return DZ_ERR_EMPTY_CLOUD;
    case Errc::class_absent:
      return DZ_ERR_CLASS_ABSENT;
    case Errc::out_of_bounds:
      return DZ_ERR_OUT_OF_BOUNDS;
    case Errc::goal_out_of_bounds:
      return DZ_ERR_GOAL_OUT_OF_BOUNDS;
    case Errc::unknown_scene:
      return DZ_ERR_UNKNOWN_SCENE;
    case Errc::config_invalid:
      return DZ_ERR_CONFIG_INVALID;
    case Errc::io_error:
      return DZ_ERR_IO;
    case Errc::no_candidates:
      return DZ_ERR_NO_CANDIDATES;
    case Errc::invalid_argument:
      return DZ_ERR_INVALID_ARGUMENT;
  }
  return DZ_ERR_INTERNAL;
}

template <typename F>
int wrap_status(F&& fn) {
  try {
    fn();
    return DZ_OK;
  } catch (const dropzone::Error& e) {
    g_last_error = e.what();
    return code_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DZ_ERR_INTERNAL;
  }
}

template <typename T, typename F>
T* wrap_handle(F&& fn) {
  try {
    return fn();
  } catch (const dropzone::Error& e) {
    g_last_error = std::string(dropzone::errc_name(e.code())) + ": " + e.what();
    return nullptr;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

int require(bool ok, const char* message) {
  if (ok) return DZ_OK;
  g_last_error = message;
  return DZ_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* dz_version(void) { return "0.1.0"; }

const char* dz_error_name(int code) {
  switch (code) {
    case DZ_OK:
      return "Ok";
    case DZ_ERR_LENGTH_MISMATCH:
      return "LengthMismatch";
    case DZ_ERR_TOO_SHORT:
      return "TooShort";
    case DZ_ERR_DEGENERATE_MOTION:
      return "DegenerateMotion";
    case DZ_ERR_INSUFFICIENT_PAIRS:
      return "InsufficientPairs";
    case DZ_ERR_EMPTY_TRAJECTORY:
      return "EmptyTrajectory";
    case DZ_ERR_EMPTY_CLOUD:
      return "EmptyCloud";
    case DZ_ERR_CLASS_ABSENT:
      return "ClassAbsent";
    case DZ_ERR_OUT_OF_BOUNDS:
      return "OutOfBounds";
    case DZ_ERR_GOAL_OUT_OF_BOUNDS:
      return "GoalOutOfBounds";
    case DZ_ERR_UNKNOWN_SCENE:
      return "UnknownScene";
    case DZ_ERR_CONFIG_INVALID:
      return "ConfigInvalid";
    case DZ_ERR_IO:
      return "IoError";
    case DZ_ERR_NO_CANDIDATES:
      return "NoCandidates";
    case DZ_ERR_INVALID_ARGUMENT:
      return "InvalidArgument";
    default:
      return "Internal";
  }
}

const char* dz_last_error(void) { return g_last_error.c_str(); }

/* ---- configuration ------------------------------------------------------ */

dz_config* dz_config_default(void) {
  return wrap_handle<dz_config>([] { return new dz_config{dropzone::default_config()}; });
}

dz_config* dz_config_load(const char* path) {
  return wrap_handle<dz_config>([&]() -> dz_config* {
    if (!path) dropzone::raise(dropzone::Errc::invalid_argument, "path is NULL");
    return new dz_config{dropzone::load_config(path)};
  });
}

int dz_config_save(const dz_config* cfg, const char* path) {
  if (int rc = require(cfg && path, "cfg and path must be non-NULL")) return rc;
  return wrap_status([&] { dropzone::save_config(cfg->value, path); });
}

void dz_config_free(dz_config* cfg) { delete cfg; }

/* ---- trajectories -------------------------------------------------------- */

dz_trajectory* dz_trajectory_load(const char* path) {
  return wrap_handle<dz_trajectory>([&]() -> dz_trajectory* {
    if (!path) dropzone::raise(dropzone::Errc::invalid_argument, "path is NULL");
    return new dz_trajectory{dropzone::read_trajectory(path)};
  });
}

int dz_trajectory_save(const dz_trajectory* traj, const char* path) {
  if (int rc = require(traj && path, "traj and path must be non-NULL")) return rc;
  return wrap_status([&] { dropzone::write_trajectory(traj->value, path); });
}

size_t dz_trajectory_size(const dz_trajectory* traj) { return traj ? traj->value.size() : 0; }

void dz_trajectory_free(dz_trajectory* traj) { delete traj; }

/* ---- clouds --------------------------------------------------------------- */

dz_cloud* dz_cloud_load(const char* path) {
  return wrap_handle<dz_cloud>([&]() -> dz_cloud* {
    if (!path) dropzone::raise(dropzone::Errc::invalid_argument, "path is NULL");
    return new dz_cloud{dropzone::read_cloud(path)};
  });
}

int dz_cloud_save(const dz_cloud* cloud, const char* path) {
  if (int rc = require(cloud && path, "cloud and path must be non-NULL")) return rc;
  return wrap_status([&] { dropzone::write_cloud(cloud->value, path); });
}

size_t dz_cloud_size(const dz_cloud* cloud) { return cloud ? cloud->value.size() : 0; }

void dz_cloud_free(dz_cloud* cloud) { delete cloud; }

/* ---- grounding ------------------------------------------------------------ */

int dz_ground(const dz_trajectory* traj_v, const dz_trajectory* traj_p, const dz_cloud* cloud,
              const dz_config* cfg, dz_trajectory** out_traj, dz_cloud** out_cloud,
              dz_ground_report* report) {
  if (int rc = require(traj_v && traj_p && cfg, "traj_v, traj_p, cfg must be non-NULL")) {
    return rc;
  }
  return wrap_status([&] {
    const dropzone::GroundingConfig& gc = cfg->value.grounding;
    dropzone::DisplacementPairs pairs =
        dropzone::relative_displacements(traj_v->value, traj_p->value, gc);
    dropzone::GroundingFit fit = dropzone::fit_sim3_displacements(pairs, gc);
    dropzone::Sim3Transform t{
        fit.scale, fit.rotation,
        dropzone::anchor_translation(fit.scale, fit.rotation, traj_v->value, traj_p->value)};

    dropzone::LabeledPointCloud empty;
    auto [grounded_traj, grounded_cloud] =
        dropzone::ground(traj_v->value, cloud ? cloud->value : empty, t);

    if (report) {
      report->scale = fit.scale;
      auto q = fit.rotation.quaternion_xyzw();
      for (int i = 0; i < 4; ++i) report->rot_quat[i] = q[i];
      report->rot_angle_deg = fit.rotation.angle() * 180.0 / M_PI;
      report->translation[0] = t.translation.x;
      report->translation[1] = t.translation.y;
      report->translation[2] = t.translation.z;
      report->fit_residual = fit.residual;
      report->n_pairs = fit.n_pairs;
      report->n_poses = traj_v->value.size();
    }
    if (out_traj) *out_traj = new dz_trajectory{std::move(grounded_traj)};
    if (out_cloud) *out_cloud = cloud ? new dz_cloud{std::move(grounded_cloud)} : nullptr;
  });
}

/* ---- trajectory metrics ---------------------------------------------------- */

int dz_eval_traj(const dz_trajectory* gt, const dz_trajectory* est, int rpe_delta,
                 dz_traj_metrics* out) {
  if (int rc = require(gt && est && out, "gt, est, out must be non-NULL")) return rc;
  return wrap_status([&] {
    dropzone::TrajectoryErrorReport r =
        dropzone::evaluate_trajectory(gt->value, est->value, rpe_delta);
    out->ate_rmse = r.ate_rmse;
    out->rpe_trans_rmse = r.rpe_trans_rmse;
    out->rpe_rot_rmse_deg = r.rpe_rot_rmse_deg;
    out->n_poses = r.n_poses;
    out->n_dropped = r.n_dropped;
  });
}

/* ---- lifting ---------------------------------------------------------------- */

dz_cloud* dz_lift(const char* depth_dir, const char* poses_path, const char* masks_dir,
                  double nms_iou, uint64_t* skipped_pixels) {
  return wrap_handle<dz_cloud>([&]() -> dz_cloud* {
    if (!depth_dir || !poses_path || !masks_dir) {
      dropzone::raise(dropzone::Errc::invalid_argument, "directories must be non-NULL");
    }
    dropzone::LiftOptions opts;
    opts.nms_iou = nms_iou;
    std::size_t skipped = 0;
    auto cloud = dropzone::lift_directory(depth_dir, poses_path, masks_dir, opts, &skipped);
    if (skipped_pixels) *skipped_pixels = skipped;
    return new dz_cloud{std::move(cloud)};
  });
}

/* ---- semantic targets ------------------------------------------------------- */

int dz_extract_target(const dz_cloud* cloud, int class_id, uint64_t medoid_cap, uint64_t seed,
                      dz_target* out) {
  if (int rc = require(cloud && out, "cloud and out must be non-NULL")) return rc;
  return wrap_status([&] {
    dropzone::TargetOptions opts;
    opts.medoid_cap = static_cast<std::size_t>(medoid_cap);
    opts.seed = seed;
    dropzone::SemanticTarget t = dropzone::extract_target(cloud->value, class_id, opts);
    out->class_id = t.class_id;
    out->position[0] = t.representative.x;
    out->position[1] = t.representative.y;
    out->position[2] = t.representative.z;
    out->confidence = t.confidence;
    out->point_count = t.point_count;
    std::snprintf(out->method, sizeof(out->method), "%s",
                  dropzone::target_method_name(t.method));
  });
}

/* ---- rasters ------------------------------------------------------------------ */

dz_raster* dz_raster_load(const char* path) {
  return wrap_handle<dz_raster>([&]() -> dz_raster* {
    if (!path) dropzone::raise(dropzone::Errc::invalid_argument, "path is NULL");
    return new dz_raster{dropzone::read_esri_grid(path)};
  });
}

int dz_raster_save(const dz_raster* raster, const char* path, int integer_values) {
  if (int rc = require(raster && path, "raster and path must be non-NULL")) return rc;
  return wrap_status(
      [&] { dropzone::write_esri_grid(raster->value, path, integer_values != 0); });
}

int dz_raster_shape(const dz_raster* raster, int* nrows, int* ncols) {
  if (int rc = require(raster != nullptr, "raster must be non-NULL")) return rc;
  if (nrows) *nrows = raster->value.nrows();
  if (ncols) *ncols = raster->value.ncols();
  return DZ_OK;
}

int dz_raster_get(const dz_raster* raster, int row, int col, double* value) {
  if (int rc = require(raster && value, "raster and value must be non-NULL")) return rc;
  return wrap_status([&] { *value = raster->value(row, col); });
}

void dz_raster_free(dz_raster* raster) { delete raster; }

/* ---- mapping --------------------------------------------------------------------- */

dz_mapset* dz_build_maps(const dz_cloud* cloud, const dz_config* cfg, const double* origin_xy,
                         int ncols, int nrows) {
  return wrap_handle<dz_mapset>([&]() -> dz_mapset* {
    if (!cloud || !cfg) {
      dropzone::raise(dropzone::Errc::invalid_argument, "cloud and cfg must be non-NULL");
    }
    std::optional<dropzone::GridSpec> spec;
    if (origin_xy && ncols > 0 && nrows > 0) {
      spec = dropzone::GridSpec{origin_xy[0], origin_xy[1], cfg->value.grid.resolution, ncols,
                                nrows};
    }
    return new dz_mapset{dropzone::build_maps(cloud->value, cfg->value, spec)};
  });
}

int dz_mapset_write(const dz_mapset* maps, const dz_config* cfg, const char* out_dir) {
  if (int rc = require(maps && cfg && out_dir, "maps, cfg, out_dir must be non-NULL")) return rc;
  return wrap_status([&] { dropzone::write_maps(maps->value, cfg->value, out_dir); });
}

dz_raster* dz_mapset_raster(const dz_mapset* maps, const char* layer) {
  return wrap_handle<dz_raster>([&]() -> dz_raster* {
    if (!maps || !layer) {
      dropzone::raise(dropzone::Errc::invalid_argument, "maps and layer must be non-NULL");
    }
    const dropzone::MapSet& m = maps->value;
    std::string name(layer);
    if (name == "height") return new dz_raster{m.bev.height_raster()};
    if (name == "classes") return new dz_raster{m.bev.class_raster()};
    if (name == "confidence") return new dz_raster{m.bev.confidence_raster()};
    if (name == "slope") return new dz_raster{m.features.slope};
    if (name == "roughness") return new dz_raster{m.features.roughness};
    if (name == "clearance") return new dz_raster{m.features.clearance};
    if (name == "t_geo") return new dz_raster{m.trav.t_geo};
    if (name == "t_sem") return new dz_raster{m.trav.t_sem};
    if (name == "traversability") return new dz_raster{m.trav.t};
    dropzone::raise(dropzone::Errc::invalid_argument, "unknown layer '" + name + "'");
  });
}

int dz_mapset_stats(const dz_mapset* maps, uint64_t* n_points, uint64_t* n_dropped) {
  if (int rc = require(maps != nullptr, "maps must be non-NULL")) return rc;
  if (n_points) *n_points = maps->value.n_points;
  if (n_dropped) *n_dropped = maps->value.n_dropped;
  return DZ_OK;
}

void dz_mapset_free(dz_mapset* maps) { delete maps; }

/* ---- deployment --------------------------------------------------------------------- */

dz_zones* dz_select(const dz_raster* traversability, double goal_x, double goal_y,
                    const dz_config* cfg) {
  return wrap_handle<dz_zones>([&]() -> dz_zones* {
    if (!traversability || !cfg) {
      dropzone::raise(dropzone::Errc::invalid_argument, "raster and cfg must be non-NULL");
    }
    return new dz_zones{dropzone::select_deployment(traversability->value, goal_x, goal_y,
                                                    cfg->value.deployment)};
  });
}

size_t dz_zones_count(const dz_zones* zones) { return zones ? zones->value.size() : 0; }

int dz_zones_get(const dz_zones* zones, size_t index, dz_zone* out) {
  if (int rc = require(zones && out, "zones and out must be non-NULL")) return rc;
  if (index >= zones->value.size()) {
    g_last_error = "zone index out of range";
    return DZ_ERR_OUT_OF_BOUNDS;
  }
  const dropzone::DeploymentCandidate& c = zones->value[index];
  out->rank = static_cast<int>(index) + 1;
  out->row = c.row;
  out->col = c.col;
  out->x = c.x;
  out->y = c.y;
  out->score_t = c.score_t;
  out->goal_distance = c.goal_distance;
  out->objective = c.objective;
  out->reachable = c.reachable ? 1 : 0;
  return DZ_OK;
}

int dz_zones_save_csv(const dz_zones* zones, const char* path) {
  if (int rc = require(zones && path, "zones and path must be non-NULL")) return rc;
  return wrap_status([&] { dropzone::write_zones_csv(zones->value, path); });
}

void dz_zones_free(dz_zones* zones) { delete zones; }

/* ---- traversability evaluation -------------------------------------------------------- */

int dz_eval_trav(const dz_raster* pred, const dz_raster* gt, dz_trav_metrics* out) {
  if (int rc = require(pred && gt && out, "pred, gt, out must be non-NULL")) return rc;
  return wrap_status([&] {
    dropzone::TravEvalReport r = dropzone::evaluate(pred->value, gt->value);
    out->macc = r.macc;
    out->aacc = r.aacc;
    out->mse = r.mse;
    out->roc_auc_defined = r.roc_auc.has_value() ? 1 : 0;
    out->roc_auc = r.roc_auc.value_or(std::nan(""));
    out->n_cells = r.n_cells;
  });
}

/* ---- scenes ------------------------------------------------------------------------------ */

dz_scene* dz_scene_synth(const char* name, uint64_t seed, const char* params) {
  return wrap_handle<dz_scene>([&]() -> dz_scene* {
    if (!name) dropzone::raise(dropzone::Errc::invalid_argument, "name is NULL");
    dropzone::SceneParams p =
        dropzone::parse_scene_params(params ? std::string(params) : std::string());
    return new dz_scene{dropzone::synth_scene(name, seed, p)};
  });
}

int dz_scene_write(const dz_scene* scene, const char* out_dir) {
  if (int rc = require(scene && out_dir, "scene and out_dir must be non-NULL")) return rc;
  return wrap_status([&] { dropzone::write_scene(scene->value, out_dir); });
}

int dz_scene_goal(const dz_scene* scene, double* goal_x, double* goal_y) {
  if (int rc = require(scene != nullptr, "scene must be non-NULL")) return rc;
  if (goal_x) *goal_x = scene->value.goal_x;
  if (goal_y) *goal_y = scene->value.goal_y;
  return DZ_OK;
}

void dz_scene_free(dz_scene* scene) { delete scene; }

/* ---- rendering ------------------------------------------------------------------------------ */

int dz_render_ppm(const dz_raster* raster, const char* out_path) {
  if (int rc = require(raster && out_path, "raster and out_path must be non-NULL")) return rc;
  return wrap_status([&] { dropzone::render_heatmap(raster->value, out_path); });
}

} /* extern "C" */
