#include "dropzone/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

namespace dropzone {

void render_heatmap(const Raster& raster, const std::string& out_path) {
  raster.spec().validate();
  std::ofstream out(out_path, std::ios::binary);
  if (!out) raise(Errc::io_error, "cannot write image file: " + out_path);

  out << "P6\n" << raster.ncols() << " " << raster.nrows() << "\n255\n";
  std::vector<uint8_t> line(static_cast<std::size_t>(raster.ncols()) * 3);
  for (int row = 0; row < raster.nrows(); ++row) {
    for (int col = 0; col < raster.ncols(); ++col) {
      uint8_t* px = &line[static_cast<std::size_t>(col) * 3];
      if (!raster.has_data(row, col)) {
        px[0] = px[1] = px[2] = 128;
        continue;
      }
      double v = std::clamp(raster(row, col), 0.0, 1.0);
      int red = static_cast<int>(std::floor(255.0 * (1.0 - v) + 0.5));
      px[0] = static_cast<uint8_t>(red);
      px[1] = static_cast<uint8_t>(255 - red);
      px[2] = 0;
    }
    out.write(reinterpret_cast<const char*>(line.data()),
              static_cast<std::streamsize>(line.size()));
  }
  if (!out) raise(Errc::io_error, "write failed: " + out_path);
}

}  // namespace dropzone
