#include "dropzone/raster.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dropzone {

namespace {

constexpr double kNoDataSentinel = -9999.0;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

void GridSpec::validate() const {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    raise(Errc::config_invalid, "grid resolution must be positive");
  }
  if (ncols < 1 || nrows < 1) raise(Errc::config_invalid, "grid must have at least one cell");
  if (!std::isfinite(origin_x) || !std::isfinite(origin_y)) {
    raise(Errc::config_invalid, "grid origin must be finite");
  }
}

std::pair<double, double> GridSpec::cell_center(int row, int col) const {
  if (!in_bounds(row, col)) raise(Errc::out_of_bounds, "cell index out of bounds");
  return {origin_x + (col + 0.5) * resolution, origin_y + (row + 0.5) * resolution};
}

std::optional<std::pair<int, int>> GridSpec::bin(double x, double y) const {
  int col = static_cast<int>(std::floor((x - origin_x) / resolution));
  int row = static_cast<int>(std::floor((y - origin_y) / resolution));
  if (!in_bounds(row, col)) return std::nullopt;
  return std::make_pair(row, col);
}

Raster::Raster(const GridSpec& spec, double fill) : spec_(spec) {
  spec_.validate();
  values_.assign(static_cast<std::size_t>(spec_.nrows) * spec_.ncols, fill);
}

std::size_t Raster::data_count() const {
  std::size_t n = 0;
  for (double v : values_) {
    if (!std::isnan(v)) ++n;
  }
  return n;
}

Raster read_esri_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open raster file: " + path);

  GridSpec spec;
  double nodata = kNoDataSentinel;
  int header_fields = 0;
  std::string key;
  while (header_fields < 5 && in >> key) {
    std::string k = lower(key);
    double value;
    if (!(in >> value)) raise(Errc::io_error, path + ": malformed header value for " + key);
    if (k == "ncols") {
      spec.ncols = static_cast<int>(value);
      ++header_fields;
    } else if (k == "nrows") {
      spec.nrows = static_cast<int>(value);
      ++header_fields;
    } else if (k == "xllcorner") {
      spec.origin_x = value;
      ++header_fields;
    } else if (k == "yllcorner") {
      spec.origin_y = value;
      ++header_fields;
    } else if (k == "cellsize") {
      spec.resolution = value;
      ++header_fields;
    } else {
      raise(Errc::io_error, path + ": unexpected header key " + key);
    }
  }
  if (header_fields < 5) raise(Errc::io_error, path + ": incomplete ESRI header");

  // Optional NODATA_value line.
  auto data_start = in.tellg();
  if (in >> key && lower(key) == "nodata_value") {
    if (!(in >> nodata)) raise(Errc::io_error, path + ": malformed NODATA_value");
  } else {
    in.clear();
    in.seekg(data_start);
  }

  try {
    spec.validate();
  } catch (const Error& e) {
    raise(Errc::io_error, path + ": " + e.what());
  }

  Raster raster(spec);
  for (int i = 0; i < spec.nrows; ++i) {
    int row = spec.nrows - 1 - i;  // file stores the top row first
    for (int col = 0; col < spec.ncols; ++col) {
      double v;
      if (!(in >> v)) raise(Errc::io_error, path + ": truncated raster data");
      raster.at(row, col) = (v == nodata) ? Raster::kNoData : v;
    }
  }
  return raster;
}

void write_esri_grid(const Raster& raster, const std::string& path, bool integer_values) {
  std::ofstream out(path);
  if (!out) raise(Errc::io_error, "cannot write raster file: " + path);
  const GridSpec& spec = raster.spec();

  char buf[64];
  out << "ncols " << spec.ncols << "\n";
  out << "nrows " << spec.nrows << "\n";
  std::snprintf(buf, sizeof(buf), "%.9g", spec.origin_x);
  out << "xllcorner " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.9g", spec.origin_y);
  out << "yllcorner " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.9g", spec.resolution);
  out << "cellsize " << buf << "\n";
  out << "NODATA_value -9999\n";

  for (int i = 0; i < spec.nrows; ++i) {
    int row = spec.nrows - 1 - i;
    for (int col = 0; col < spec.ncols; ++col) {
      if (col > 0) out << ' ';
      if (!raster.has_data(row, col)) {
        out << "-9999";
      } else if (integer_values) {
        out << static_cast<long long>(std::llround(raster(row, col)));
      } else {
        std::snprintf(buf, sizeof(buf), "%.6g", raster(row, col));
        out << buf;
      }
    }
    out << "\n";
  }
  if (!out) raise(Errc::io_error, "write failed: " + path);
}

}  // namespace dropzone
