#pragma once

#include <vector>

#include "render/camera.hpp"
#include "render/raster.hpp"
#include "scene/resolved_scene.hpp"

namespace scenediag::render {

/// Floor, table, board squares, piece silhouettes, cards and chip stacks,
/// projected through the scene camera and sorted back to front. Object
/// primitives carry tags: "piece:<i>", "card:<code>", "chip:<player>:<i>".
std::vector<ScenePrimitive> project_scene(const scene::ResolvedScene& scene);

/// project_scene, rasterize, then the image-space noise layer.
RasterImage render_scene(const scene::ResolvedScene& scene);

}  // namespace scenediag::render
