#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dropzone/errors.hpp"

namespace dropzone {

/// Bird's-eye-view grid geometry. origin_* is the lower-left corner; row 0
/// is the southernmost row, so cell (row, col) covers
/// [origin + col*res, origin + (col+1)*res) x [origin + row*res, ...).
struct GridSpec {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double resolution = 0.25;  // meters per cell
  int ncols = 0;
  int nrows = 0;

  void validate() const;
  bool in_bounds(int row, int col) const {
    return row >= 0 && row < nrows && col >= 0 && col < ncols;
  }

  /// Center coordinates (x, y) of a cell; throws OutOfBounds.
  std::pair<double, double> cell_center(int row, int col) const;

  /// Cell containing (x, y), or nullopt when outside the grid.
  std::optional<std::pair<int, int>> bin(double x, double y) const;

  bool operator==(const GridSpec& o) const = default;
};

/// Dense scalar raster on a GridSpec. NaN marks no-data cells.
class Raster {
 public:
  static constexpr double kNoData = std::numeric_limits<double>::quiet_NaN();

  Raster() = default;
  explicit Raster(const GridSpec& spec, double fill = kNoData);

  const GridSpec& spec() const { return spec_; }
  int nrows() const { return spec_.nrows; }
  int ncols() const { return spec_.ncols; }

  double operator()(int row, int col) const { return values_[index(row, col)]; }
  double& at(int row, int col) { return values_[index(row, col)]; }
  bool has_data(int row, int col) const { return !std::isnan(values_[index(row, col)]); }

  std::size_t data_count() const;

 private:
  std::size_t index(int row, int col) const {
    if (!spec_.in_bounds(row, col)) raise(Errc::out_of_bounds, "raster index out of bounds");
    return static_cast<std::size_t>(row) * spec_.ncols + col;
  }

  GridSpec spec_;
  std::vector<double> values_;
};

/// ESRI ASCII grid. Header: ncols, nrows, xllcorner, yllcorner, cellsize,
/// NODATA_value -9999; data rows follow top row (largest y) first. Values
/// are written with 6 significant digits, or as integers when
/// integer_values is set (used for the class raster).
Raster read_esri_grid(const std::string& path);
void write_esri_grid(const Raster& raster, const std::string& path, bool integer_values = false);

}  // namespace dropzone
