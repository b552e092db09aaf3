#pragma once

#include <vector>

#include "dropzone/bev.hpp"
#include "dropzone/compatibility.hpp"
#include "dropzone/raster.hpp"

namespace dropzone {

struct FeatureConfig {
  int k_slope = 2;        // half-width of the slope window
  int k_rough = 5;        // half-width of the roughness window, > k_slope
  int min_neighbors = 3;  // data cells required in a window

  void validate() const;
};

struct SlopeResult {
  Raster slope;     // radians in [0, pi/2]
  Raster normal_z;  // vertical normal component in [0, 1]
};

/// PCA surface normals over a (2k+1)^2 window of occupied-cell height points
/// (x_center, y_center, mean height). The normal is the eigenvector of the
/// smallest covariance eigenvalue, flipped so n_z >= 0; slope = arccos(n_z).
/// Cells with fewer than min_neighbors window samples stay no-data, as do
/// cells whose two smallest eigenvalues tie (isotropic neighborhoods give no
/// usable normal, and must not silently read as flat).
SlopeResult slope_map(const BevGrid& grid, const FeatureConfig& cfg);

/// Population standard deviation of the mean heights over the (2k'+1)^2
/// window, data cells only.
Raster roughness_map(const BevGrid& grid, const FeatureConfig& cfg);

struct CellIndex {
  int row = 0;
  int col = 0;
  bool operator==(const CellIndex& o) const = default;
};

struct ObstacleSet {
  std::vector<CellIndex> cells;  // row-major order, unique
};

/// Occupied cells: dominant class with compatibility exactly 0, plus cells
/// whose slope exceeds s_hard. Empty cells are never obstacles (unknown is
/// handled through confidence and no-data, not as a wall).
ObstacleSet derive_obstacles(const BevGrid& grid, const Raster& slope,
                             const CompatibilityTable& tau, double s_hard);

/// Exact Euclidean distance between cell centers to the nearest obstacle,
/// via the two-pass separable lower-envelope transform on squared cell
/// distances. Obstacle cells get 0; with no obstacles every cell gets +inf
/// (callers serialize the sentinel as d_soft * 10).
Raster clearance_map(const GridSpec& spec, const ObstacleSet& obstacles);

struct FeatureMaps {
  Raster slope;
  Raster roughness;
  Raster clearance;
  Raster normal_z;
};

/// Slope, roughness, obstacle derivation, and clearance in one pass.
FeatureMaps compute_features(const BevGrid& grid, const FeatureConfig& cfg,
                             const CompatibilityTable& tau, double s_hard);

}  // namespace dropzone
