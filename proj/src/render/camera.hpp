#pragma once

#include <optional>
#include <vector>

#include "common/geometry.hpp"
#include "scene/scene_model.hpp"

namespace scenediag::render {

inline constexpr double kVerticalFov = 50.0;
inline constexpr double kNearPlane = 0.01;

/// Pinhole camera. Camera space: x right, y up, z along the view direction.
struct CameraPose {
    Vec3 eye;
    Vec3 look_at;
    Vec3 forward;
    Vec3 right;
    Vec3 up;
    double vfov_deg = kVerticalFov;
    int width = 0;
    int height = 0;
    double focal_px = 0;
};

/// Eye on a sphere of radius `distance` around the table-top center, at
/// `angle` degrees of elevation and `horizontal_angle` of azimuth from +x.
CameraPose make_camera_pose(const scene::Setup& setup);

Vec3 to_camera(const CameraPose& pose, Vec3 world);

struct ProjectedPoint {
    Vec2 pixel;
    double depth = 0;
};

/// nullopt when the point lies behind the near plane.
std::optional<ProjectedPoint> project_point(const CameraPose& pose, Vec3 world);

/// Projects a planar polygon after clipping it against the near plane.
std::vector<Vec2> project_polygon(const CameraPose& pose, const std::vector<Vec3>& polygon);

/// World point where the ray through `pixel` meets the plane z = plane_z.
std::optional<Vec3> unproject_to_plane(const CameraPose& pose, Vec2 pixel, double plane_z);

}  // namespace scenediag::render
