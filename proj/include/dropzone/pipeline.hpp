#pragma once

#include <optional>
#include <string>

#include "dropzone/bev.hpp"
#include "dropzone/config.hpp"
#include "dropzone/features.hpp"
#include "dropzone/traversability.hpp"

namespace dropzone {

/// Everything the mapping stage produces for one cloud.
struct MapSet {
  BevGrid bev;
  FeatureMaps features;
  TraversabilityMap trav;
  std::size_t n_points = 0;
  std::size_t n_dropped = 0;
};

/// cloud -> BEV aggregates -> terrain features -> fused traversability.
/// Uses auto_spec over the cloud unless an explicit grid is given.
MapSet build_maps(const LabeledPointCloud& cloud, const RunConfig& cfg,
                  const std::optional<GridSpec>& explicit_grid = std::nullopt);

/// Writes height.asc, classes.asc, confidence.asc, slope.asc, roughness.asc,
/// clearance.asc, t_geo.asc, t_sem.asc, traversability.asc and a
/// map_report.txt under out_dir. Infinite clearance (no obstacles anywhere)
/// is serialized as d_soft * 10.
void write_maps(const MapSet& maps, const RunConfig& cfg, const std::string& out_dir);

}  // namespace dropzone
