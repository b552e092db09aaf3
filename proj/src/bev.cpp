#include "dropzone/bev.hpp"

#include <cmath>
#include <map>

namespace dropzone {

BevGrid::BevGrid(const GridSpec& spec, std::vector<BevCell> cells, std::size_t dropped)
    : spec_(spec), cells_(std::move(cells)), dropped_(dropped) {
  spec_.validate();
  if (cells_.size() != static_cast<std::size_t>(spec_.nrows) * spec_.ncols) {
    raise(Errc::invalid_argument, "cell storage does not match grid spec");
  }
}

const BevCell& BevGrid::cell(int row, int col) const {
  if (!spec_.in_bounds(row, col)) raise(Errc::out_of_bounds, "cell index out of bounds");
  return cells_[static_cast<std::size_t>(row) * spec_.ncols + col];
}

std::size_t BevGrid::occupied_cells() const {
  std::size_t n = 0;
  for (const auto& c : cells_) {
    if (c.count > 0) ++n;
  }
  return n;
}

Raster BevGrid::height_raster() const {
  Raster r(spec_);
  for (int row = 0; row < spec_.nrows; ++row) {
    for (int col = 0; col < spec_.ncols; ++col) {
      const BevCell& c = cell(row, col);
      if (c.count > 0) r.at(row, col) = c.mean_height;
    }
  }
  return r;
}

Raster BevGrid::class_raster() const {
  Raster r(spec_);
  for (int row = 0; row < spec_.nrows; ++row) {
    for (int col = 0; col < spec_.ncols; ++col) {
      const BevCell& c = cell(row, col);
      if (c.count > 0) r.at(row, col) = static_cast<double>(c.dominant_class);
    }
  }
  return r;
}

Raster BevGrid::confidence_raster() const {
  Raster r(spec_);
  for (int row = 0; row < spec_.nrows; ++row) {
    for (int col = 0; col < spec_.ncols; ++col) {
      const BevCell& c = cell(row, col);
      if (c.count > 0) r.at(row, col) = c.mean_conf;
    }
  }
  return r;
}

GridSpec auto_spec(const LabeledPointCloud& cloud, double resolution, double padding) {
  if (cloud.empty()) raise(Errc::empty_cloud, "auto_spec needs a non-empty cloud");
  if (!(resolution > 0.0)) raise(Errc::config_invalid, "resolution must be positive");
  if (padding < 0.0) raise(Errc::config_invalid, "padding must be non-negative");

  double min_x = cloud[0].position.x, max_x = min_x;
  double min_y = cloud[0].position.y, max_y = min_y;
  for (const auto& p : cloud) {
    min_x = std::min(min_x, p.position.x);
    max_x = std::max(max_x, p.position.x);
    min_y = std::min(min_y, p.position.y);
    max_y = std::max(max_y, p.position.y);
  }

  GridSpec spec;
  spec.resolution = resolution;
  spec.origin_x = std::floor((min_x - padding) / resolution) * resolution;
  spec.origin_y = std::floor((min_y - padding) / resolution) * resolution;
  // floor+1 rather than ceil so points sitting exactly on the upper cell
  // boundary still bin inside the grid.
  spec.ncols = static_cast<int>(std::floor((max_x + padding - spec.origin_x) / resolution)) + 1;
  spec.nrows = static_cast<int>(std::floor((max_y + padding - spec.origin_y) / resolution)) + 1;
  spec.validate();
  return spec;
}

BevGrid build_bev(const LabeledPointCloud& cloud, const GridSpec& spec) {
  spec.validate();
  const std::size_t n_cells = static_cast<std::size_t>(spec.nrows) * spec.ncols;

  struct Accum {
    int count = 0;
    double sum_z = 0.0;
    double sum_conf = 0.0;
    std::map<int, int> class_counts;  // ordered: ties resolve to lowest id
  };
  std::vector<Accum> acc(n_cells);

  std::size_t dropped = 0;
  for (const auto& p : cloud) {
    auto rc = spec.bin(p.position.x, p.position.y);
    if (!rc) {
      ++dropped;
      continue;
    }
    Accum& a = acc[static_cast<std::size_t>(rc->first) * spec.ncols + rc->second];
    a.count += 1;
    a.sum_z += p.position.z;
    a.sum_conf += p.confidence;
    a.class_counts[p.class_id] += 1;
  }

  std::vector<BevCell> cells(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) {
    const Accum& a = acc[i];
    if (a.count == 0) continue;
    BevCell& c = cells[i];
    c.count = a.count;
    c.mean_height = a.sum_z / a.count;
    c.mean_conf = a.sum_conf / a.count;

    int best_class = classes::kUnlabeled;
    int best_count = 0;
    for (const auto& [cls, cnt] : a.class_counts) {
      if (cls == classes::kUnlabeled) continue;
      if (cnt > best_count) {
        best_count = cnt;
        best_class = cls;
      }
    }
    c.dominant_class = best_count > 0 ? best_class : classes::kUnlabeled;
  }
  return BevGrid(spec, std::move(cells), dropped);
}

}  // namespace dropzone
