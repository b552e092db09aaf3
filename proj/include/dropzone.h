/* dropzone C API: metric grounding, traversability mapping, and deployment
 * zone selection behind opaque handles.
 *
 * Conventions:
 *   - Functions returning a pointer yield NULL on failure.
 *   - Functions returning int yield DZ_OK (0) or an error code.
 *   - dz_last_error() returns a thread-local message for the most recent
 *     failure; dz_error_name(code) returns the stable error name.
 *   - Every handle is released with its matching *_free function; freeing
 *     NULL is a no-op.
 */
#ifndef DROPZONE_H
#define DROPZONE_H

#include <stddef.h>
#include <stdint.h>

#if defined _WIN32
#define DZ_API __declspec(dllexport)
#else
#define DZ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  DZ_OK = 0,
  DZ_ERR_LENGTH_MISMATCH = 1,
  DZ_ERR_TOO_SHORT = 2,
  DZ_ERR_DEGENERATE_MOTION = 3,
  DZ_ERR_INSUFFICIENT_PAIRS = 4,
  DZ_ERR_EMPTY_TRAJECTORY = 5,
  DZ_ERR_EMPTY_CLOUD = 6,
  DZ_ERR_CLASS_ABSENT = 7,
  DZ_ERR_OUT_OF_BOUNDS = 8,
  DZ_ERR_GOAL_OUT_OF_BOUNDS = 9,
  DZ_ERR_UNKNOWN_SCENE = 10,
  DZ_ERR_CONFIG_INVALID = 11,
  DZ_ERR_IO = 12,
  DZ_ERR_NO_CANDIDATES = 13,
  DZ_ERR_INVALID_ARGUMENT = 14,
  DZ_ERR_INTERNAL = 15
};

DZ_API const char* dz_version(void);
DZ_API const char* dz_error_name(int code);
DZ_API const char* dz_last_error(void);

/* ---- opaque handles ---------------------------------------------------- */

typedef struct dz_config dz_config;
typedef struct dz_trajectory dz_trajectory;
typedef struct dz_cloud dz_cloud;
typedef struct dz_raster dz_raster;
typedef struct dz_mapset dz_mapset;
typedef struct dz_zones dz_zones;
typedef struct dz_scene dz_scene;

/* ---- configuration ------------------------------------------------------ */

DZ_API dz_config* dz_config_default(void);
DZ_API dz_config* dz_config_load(const char* path);
DZ_API int dz_config_save(const dz_config* cfg, const char* path);
DZ_API void dz_config_free(dz_config* cfg);

/* ---- trajectories (text files: timestamp tx ty tz qx qy qz qw) --------- */

DZ_API dz_trajectory* dz_trajectory_load(const char* path);
DZ_API int dz_trajectory_save(const dz_trajectory* traj, const char* path);
DZ_API size_t dz_trajectory_size(const dz_trajectory* traj);
DZ_API void dz_trajectory_free(dz_trajectory* traj);

/* ---- labeled clouds (text files: x y z class_id confidence) ------------ */

DZ_API dz_cloud* dz_cloud_load(const char* path);
DZ_API int dz_cloud_save(const dz_cloud* cloud, const char* path);
DZ_API size_t dz_cloud_size(const dz_cloud* cloud);
DZ_API void dz_cloud_free(dz_cloud* cloud);

/* ---- metric grounding ---------------------------------------------------
 * Fits scale and rotation from matched inter-frame displacements, anchors
 * translation on the first pose pair, and applies the transform. cloud may
 * be NULL for trajectory-only grounding; out_traj/out_cloud may be NULL
 * when the caller only needs the report. */

typedef struct dz_ground_report {
  double scale;
  double rot_quat[4]; /* x, y, z, w */
  double rot_angle_deg;
  double translation[3];
  double fit_residual; /* sum ||dp - s R dv||^2 */
  uint64_t n_pairs;
  uint64_t n_poses;
} dz_ground_report;

DZ_API int dz_ground(const dz_trajectory* traj_v, const dz_trajectory* traj_p,
                     const dz_cloud* cloud, const dz_config* cfg, dz_trajectory** out_traj,
                     dz_cloud** out_cloud, dz_ground_report* report);

/* ---- trajectory evaluation (ATE / RPE) --------------------------------- */

typedef struct dz_traj_metrics {
  double ate_rmse;          /* meters, after Sim(3) alignment */
  double rpe_trans_rmse;    /* meters */
  double rpe_rot_rmse_deg;  /* degrees */
  uint64_t n_poses;
  uint64_t n_dropped;       /* poses dropped by timestamp association */
} dz_traj_metrics;

DZ_API int dz_eval_traj(const dz_trajectory* gt, const dz_trajectory* est, int rpe_delta,
                        dz_traj_metrics* out);

/* ---- semantic lifting ---------------------------------------------------
 * depth_dir holds frame{t:05}.depth rasters (optional frame{t:05}.conf),
 * poses_path one pose line per frame, masks_dir
 * frame{t:05}_inst{k:04}_class{c}.pgm masks. nms_iou <= 0 disables
 * per-frame suppression. */

DZ_API dz_cloud* dz_lift(const char* depth_dir, const char* poses_path, const char* masks_dir,
                         double nms_iou, uint64_t* skipped_pixels);

/* ---- semantic targets ----------------------------------------------------
 * Representative coordinate of a class: exact medoid up to medoid_cap
 * points, seeded sampled medoid beyond it, centroid when medoid_cap is 0.
 * Pass medoid_cap = 2000 for the stock behavior. */

typedef struct dz_target {
  int class_id;
  double position[3];
  double confidence; /* mean point confidence over the class */
  uint64_t point_count;
  char method[16]; /* "medoid", "sampled-medoid", "centroid" */
} dz_target;

DZ_API int dz_extract_target(const dz_cloud* cloud, int class_id, uint64_t medoid_cap,
                             uint64_t seed, dz_target* out);

/* ---- rasters (ESRI ASCII grid files) ------------------------------------ */

DZ_API dz_raster* dz_raster_load(const char* path);
DZ_API int dz_raster_save(const dz_raster* raster, const char* path, int integer_values);
DZ_API int dz_raster_shape(const dz_raster* raster, int* nrows, int* ncols);
/* value is NaN for no-data cells. */
DZ_API int dz_raster_get(const dz_raster* raster, int row, int col, double* value);
DZ_API void dz_raster_free(dz_raster* raster);

/* ---- mapping ------------------------------------------------------------
 * Builds BEV aggregates, terrain features, and the fused traversability
 * map. Pass origin_xy = NULL (with ncols/nrows <= 0) to derive the grid
 * from the cloud bounds. Layers: height, classes, confidence, slope,
 * roughness, clearance, t_geo, t_sem, traversability. */

DZ_API dz_mapset* dz_build_maps(const dz_cloud* cloud, const dz_config* cfg,
                                const double* origin_xy, int ncols, int nrows);
DZ_API int dz_mapset_write(const dz_mapset* maps, const dz_config* cfg, const char* out_dir);
DZ_API dz_raster* dz_mapset_raster(const dz_mapset* maps, const char* layer);
DZ_API int dz_mapset_stats(const dz_mapset* maps, uint64_t* n_points, uint64_t* n_dropped);
DZ_API void dz_mapset_free(dz_mapset* maps);

/* ---- deployment zone selection ------------------------------------------ */

typedef struct dz_zone {
  int rank;
  int row;
  int col;
  double x;
  double y;
  double score_t;
  double goal_distance;
  double objective;
  int reachable;
} dz_zone;

/* Fails with DZ_ERR_NO_CANDIDATES when nothing passes the threshold,
 * radius, and reachability filters. */
DZ_API dz_zones* dz_select(const dz_raster* traversability, double goal_x, double goal_y,
                           const dz_config* cfg);
DZ_API size_t dz_zones_count(const dz_zones* zones);
DZ_API int dz_zones_get(const dz_zones* zones, size_t index, dz_zone* out);
DZ_API int dz_zones_save_csv(const dz_zones* zones, const char* path);
DZ_API void dz_zones_free(dz_zones* zones);

/* ---- traversability evaluation ------------------------------------------ */

typedef struct dz_trav_metrics {
  double macc;
  double aacc;
  double roc_auc; /* NaN when roc_auc_defined == 0 */
  double mse;
  int roc_auc_defined;
  uint64_t n_cells;
} dz_trav_metrics;

DZ_API int dz_eval_trav(const dz_raster* pred, const dz_raster* gt, dz_trav_metrics* out);

/* ---- synthetic scenes ----------------------------------------------------
 * names: incline, step, culvert, rockfield, smoothed-rocks.
 * params: "key=value,..." with keys theta_deg, n_rocks, step_height;
 * NULL or "" keeps the defaults. */

DZ_API dz_scene* dz_scene_synth(const char* name, uint64_t seed, const char* params);
DZ_API int dz_scene_write(const dz_scene* scene, const char* out_dir);
DZ_API int dz_scene_goal(const dz_scene* scene, double* goal_x, double* goal_y);
DZ_API void dz_scene_free(dz_scene* scene);

/* ---- rendering ----------------------------------------------------------- */

DZ_API int dz_render_ppm(const dz_raster* raster, const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* DROPZONE_H */
