#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "render/raster.hpp"

namespace scenediag::render {

/// RGBA8, non-interlaced, fixed compression settings and no time chunk, so
/// equal images always encode to equal bytes.
std::vector<std::uint8_t> encode_png(const RasterImage& image);
RasterImage decode_png(const std::vector<std::uint8_t>& bytes);

void write_png(const std::string& path, const RasterImage& image);
RasterImage read_png(const std::string& path);

}  // namespace scenediag::render
