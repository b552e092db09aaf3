#include "dropzone/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

namespace dropzone {

MapSet build_maps(const LabeledPointCloud& cloud, const RunConfig& cfg,
                  const std::optional<GridSpec>& explicit_grid) {
  cfg.validate();
  GridSpec spec = explicit_grid ? *explicit_grid
                                : auto_spec(cloud, cfg.grid.resolution, cfg.grid.padding);
  spec.validate();

  BevGrid bev = build_bev(cloud, spec);
  FeatureMaps features =
      compute_features(bev, cfg.features, cfg.compatibility, cfg.thresholds.s_hard);
  PenaltyRasters penalties = penalty_scores(features, cfg.thresholds);
  Raster t_geo = geo_score(penalties, cfg.thresholds);
  Raster t_sem = sem_score(bev, cfg.compatibility);
  TraversabilityMap trav = fuse(t_geo, t_sem, bev.confidence_raster(), cfg.thresholds);

  MapSet maps{std::move(bev), std::move(features), std::move(trav), cloud.size(), 0};
  maps.n_dropped = maps.bev.dropped();
  return maps;
}

void write_maps(const MapSet& maps, const RunConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  fs::path base(out_dir);

  write_esri_grid(maps.bev.height_raster(), (base / "height.asc").string());
  write_esri_grid(maps.bev.class_raster(), (base / "classes.asc").string(),
                  /*integer_values=*/true);
  write_esri_grid(maps.bev.confidence_raster(), (base / "confidence.asc").string());
  write_esri_grid(maps.features.slope, (base / "slope.asc").string());
  write_esri_grid(maps.features.roughness, (base / "roughness.asc").string());

  // The no-obstacle sentinel (+inf) is not representable in the text format.
  Raster clearance = maps.features.clearance;
  for (int row = 0; row < clearance.nrows(); ++row) {
    for (int col = 0; col < clearance.ncols(); ++col) {
      if (clearance.has_data(row, col) && std::isinf(clearance(row, col))) {
        clearance.at(row, col) = cfg.thresholds.d_soft * 10.0;
      }
    }
  }
  write_esri_grid(clearance, (base / "clearance.asc").string());

  write_esri_grid(maps.trav.t_geo, (base / "t_geo.asc").string());
  write_esri_grid(maps.trav.t_sem, (base / "t_sem.asc").string());
  write_esri_grid(maps.trav.t, (base / "traversability.asc").string());

  std::ofstream report(base / "map_report.txt");
  if (!report) raise(Errc::io_error, "cannot write map report under " + out_dir);
  const GridSpec& spec = maps.bev.spec();
  char buf[256];
  std::snprintf(buf, sizeof(buf), "grid: origin %.9g %.9g cells %dx%d resolution %.9g\n",
                spec.origin_x, spec.origin_y, spec.ncols, spec.nrows, spec.resolution);
  report << buf;
  report << "n_points: " << maps.n_points << "\n";
  report << "n_dropped: " << maps.n_dropped << "\n";
  report << "occupied_cells: " << maps.bev.occupied_cells() << "\n";
  report << "traversable_cells: ";
  std::size_t n_trav = 0;
  for (int row = 0; row < maps.trav.t.nrows(); ++row) {
    for (int col = 0; col < maps.trav.t.ncols(); ++col) {
      if (maps.trav.t.has_data(row, col) && maps.trav.t(row, col) >= 0.5) ++n_trav;
    }
  }
  report << n_trav << "\n";
}

}  // namespace dropzone
