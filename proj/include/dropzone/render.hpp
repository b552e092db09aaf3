#pragma once

#include <string>

#include "dropzone/raster.hpp"

namespace dropzone {

/// Renders a [0, 1] raster as a binary PPM (P6, maxval 255): 0 maps to red,
/// 1 to green with linear interpolation (red = round(255 * (1 - v)),
/// green = 255 - red), no-data to gray (128, 128, 128). Values are clipped
/// to [0, 1] first. Raster row 0 lands at the top of the image.
void render_heatmap(const Raster& raster, const std::string& out_path);

}  // namespace dropzone
