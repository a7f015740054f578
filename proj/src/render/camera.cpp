#include "render/camera.hpp"

#include <cmath>

#include "common/errors.hpp"

namespace scenediag::render {

CameraPose make_camera_pose(const scene::Setup& setup) {
    const scene::Camera& cam = setup.camera;
    if (!(cam.angle > 0.0 && cam.angle <= 90.0))
        fail_validation("camera.angle: degenerate camera, elevation must lie in (0, 90]");
    if (!(cam.distance > 0.0)) fail_validation("camera.distance: must be positive");

    CameraPose pose;
    pose.width = setup.resolution.pixel_width();
    pose.height = setup.resolution.pixel_height();
    pose.look_at = {0.0, 0.0, setup.table.height};
    const double e = deg_to_rad(cam.angle);
    const double a = deg_to_rad(cam.horizontal_angle);
    pose.eye = pose.look_at + Vec3{std::cos(e) * std::cos(a), std::cos(e) * std::sin(a), std::sin(e)} * cam.distance;
    pose.forward = normalized(pose.look_at - pose.eye);
    pose.right = {-std::sin(a), std::cos(a), 0.0};
    pose.up = cross(pose.right, pose.forward);
    pose.focal_px = (pose.height / 2.0) / std::tan(deg_to_rad(pose.vfov_deg) / 2.0);
    return pose;
}

Vec3 to_camera(const CameraPose& pose, Vec3 world) {
    const Vec3 v = world - pose.eye;
    return {dot(v, pose.right), dot(v, pose.up), dot(v, pose.forward)};
}

namespace {

Vec2 camera_to_pixel(const CameraPose& pose, Vec3 c) {
    return {pose.width / 2.0 + pose.focal_px * c.x / c.z, pose.height / 2.0 - pose.focal_px * c.y / c.z};
}

}  // namespace

std::optional<ProjectedPoint> project_point(const CameraPose& pose, Vec3 world) {
    const Vec3 c = to_camera(pose, world);
    if (c.z < kNearPlane) return std::nullopt;
    return ProjectedPoint{camera_to_pixel(pose, c), c.z};
}

std::vector<Vec2> project_polygon(const CameraPose& pose, const std::vector<Vec3>& polygon) {
    std::vector<Vec3> cam;
    cam.reserve(polygon.size());
    for (const auto& p : polygon) cam.push_back(to_camera(pose, p));

    std::vector<Vec3> clipped;
    for (std::size_t i = 0; i < cam.size(); ++i) {
        const Vec3 a = cam[i];
        const Vec3 b = cam[(i + 1) % cam.size()];
        const bool ain = a.z >= kNearPlane, bin = b.z >= kNearPlane;
        if (ain) clipped.push_back(a);
        if (ain != bin) {
            const double t = (kNearPlane - a.z) / (b.z - a.z);
            clipped.push_back(a + (b - a) * t);
        }
    }
    std::vector<Vec2> out;
    out.reserve(clipped.size());
    for (const auto& c : clipped) out.push_back(camera_to_pixel(pose, c));
    return out;
}

std::optional<Vec3> unproject_to_plane(const CameraPose& pose, Vec2 pixel, double plane_z) {
    const double cx = (pixel.x - pose.width / 2.0) / pose.focal_px;
    const double cy = (pose.height / 2.0 - pixel.y) / pose.focal_px;
    const Vec3 dir = pose.right * cx + pose.up * cy + pose.forward;
    if (std::abs(dir.z) < 1e-12) return std::nullopt;
    const double t = (plane_z - pose.eye.z) / dir.z;
    if (t <= 0) return std::nullopt;
    return pose.eye + dir * t;
}

}  // namespace scenediag::render
