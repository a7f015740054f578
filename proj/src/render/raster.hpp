#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "common/geometry.hpp"
#include "render/camera.hpp"
#include "render/glyphs.hpp"
#include "scene/scene_model.hpp"

namespace scenediag::render {

struct RasterImage {
    int width = 0;
    int height = 0;
    /// RGBA8, row-major, top row first.
    std::vector<std::uint8_t> pixels;

    RasterImage() = default;
    RasterImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 4, 0) {}

    std::uint8_t* at(int x, int y) { return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 4; }
    const std::uint8_t* at(int x, int y) const { return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 4; }

    friend bool operator==(const RasterImage&, const RasterImage&) = default;
};

/// Procedural shading of a horizontal surface, evaluated per sample.
struct SurfaceTexture {
    CameraPose pose;
    double plane_z = 0;
    scene::TableTexture texture = scene::TableTexture::wood;
    scene::TextureEntropy entropy = scene::TextureEntropy::low;
    std::uint64_t seed = 0;
};

enum class Shape { polygon, disk, glyph, rounded_rect };

/// Draw layers, back to front. Within a layer primitives are ordered by
/// decreasing depth key, then by insertion order.
enum Layer : int {
    kLayerFloor = 0,
    kLayerTable = 1,
    kLayerBoard = 2,
    kLayerMarks = 3,
    kLayerFlat = 4,
    kLayerUpright = 5,
};

struct ScenePrimitive {
    Shape shape = Shape::polygon;
    int layer = kLayerFloor;
    double depth = 0;
    std::size_t order = 0;
    Rgba fill;
    std::optional<Rgba> outline;
    /// Screen-space contours in pixel units; filled as a union.
    std::vector<Contour> contours;
    std::optional<SurfaceTexture> texture;
    std::string tag;
};

inline constexpr int kSupersample = 2;

void sort_primitives(std::vector<ScenePrimitive>& primitives);

/// Fills each primitive in list order. Every output pixel averages a fixed
/// 2x2 grid of samples.
RasterImage rasterize(const std::vector<ScenePrimitive>& primitives, int width, int height,
                      Rgba background = {0.5, 0.5, 0.5, 1.0});

struct BoundingBox {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

BoundingBox bounding_box(const ScenePrimitive& primitive);

std::uint8_t to_byte(double v);

}  // namespace scenediag::render
