#pragma once

#include <vector>

#include "dropzone/cloud.hpp"
#include "dropzone/raster.hpp"

namespace dropzone {

/// Per-cell aggregates. A cell with count == 0 carries no data; its other
/// fields are meaningless and are exported as no-data.
struct BevCell {
  int count = 0;
  double mean_height = 0.0;
  int dominant_class = classes::kUnlabeled;
  double mean_conf = 0.0;
};

class BevGrid {
 public:
  BevGrid(const GridSpec& spec, std::vector<BevCell> cells, std::size_t dropped);

  const GridSpec& spec() const { return spec_; }
  const BevCell& cell(int row, int col) const;
  std::size_t dropped() const { return dropped_; }
  std::size_t occupied_cells() const;

  Raster height_raster() const;      // mean z per cell
  Raster class_raster() const;       // dominant class id
  Raster confidence_raster() const;  // mean point confidence

 private:
  GridSpec spec_;
  std::vector<BevCell> cells_;
  std::size_t dropped_ = 0;
};

/// Grid covering the cloud's xy bounding box expanded by `padding`, with the
/// origin snapped down to the resolution lattice. Every cloud point bins
/// inside the returned spec.
GridSpec auto_spec(const LabeledPointCloud& cloud, double resolution, double padding);

/// Bins every point and computes per-cell mean height, majority class, and
/// mean confidence. The unlabeled class (0) is excluded from the vote unless
/// it is the only class present; class-count ties go to the lower class id.
/// Out-of-bounds points are counted and dropped.
BevGrid build_bev(const LabeledPointCloud& cloud, const GridSpec& spec);

}  // namespace dropzone
