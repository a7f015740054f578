#include <doctest.h>

#include <cmath>

#include "render/camera.hpp"
#include "render/noise.hpp"
#include "render/png_io.hpp"
#include "render/project.hpp"
#include "render/raster.hpp"
#include "scene/resolved_scene.hpp"

using namespace scenediag;
using namespace scenediag::render;

namespace {

ScenePrimitive polygon(std::vector<Vec2> pts, Rgba fill) {
    ScenePrimitive p;
    p.fill = fill;
    p.contours.push_back(std::move(pts));
    return p;
}

double coverage(const RasterImage& img) {
    double sum = 0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) sum += img.at(x, y)[0] / 255.0;
    return sum;
}

scene::ResolvedScene small_chess_scene(const char* blur) {
    Json config = Json::parse(R"({
      "setup": {"resolution": {"width": 320, "height": 240}, "camera": {"distance": "close", "angle": "high"}},
      "chess": {"count_config": 8, "position_config": {"spread_level": "high"}}
    })");
    config["noise"] = Json{{"blur", blur}};
    return scene::resolve_presets(config, 21);
}

}  // namespace

TEST_CASE("axis-aligned square fills whole pixels") {
    const auto img = rasterize({polygon({{2, 2}, {6, 2}, {6, 6}, {2, 6}}, {1, 1, 1, 1})}, 10, 10, {0, 0, 0, 1});
    int lit = 0;
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 10; ++x) {
            const bool inside = x >= 2 && x < 6 && y >= 2 && y < 6;
            CHECK(img.at(x, y)[0] == (inside ? 255 : 0));
            lit += img.at(x, y)[0] == 255;
            CHECK(img.at(x, y)[3] == 255);
        }
    CHECK(lit == 16);
}

TEST_CASE("triangle coverage approximates its area") {
    const auto img = rasterize({polygon({{1, 1}, {31, 3}, {9, 27}}, {1, 1, 1, 1})}, 32, 32, {0, 0, 0, 1});
    const double area = 0.5 * std::abs((31 - 1) * (27 - 1) - (9 - 1) * (3 - 1));
    CHECK(coverage(img) == doctest::Approx(area).epsilon(0.03));
}

TEST_CASE("later primitives paint over earlier ones") {
    const auto img = rasterize({polygon({{0, 0}, {8, 0}, {8, 8}, {0, 8}}, {1, 0, 0, 1}),
                                polygon({{0, 0}, {4, 0}, {4, 8}, {0, 8}}, {0, 0, 1, 1})},
                               8, 8);
    CHECK(img.at(1, 1)[2] == 255);
    CHECK(img.at(1, 1)[0] == 0);
    CHECK(img.at(6, 1)[0] == 255);
}

TEST_CASE("projection puts the look-at point at the image center") {
    scene::Setup setup;
    setup.resolution.width = 640;
    setup.resolution.height = 480;
    const auto pose = make_camera_pose(setup);
    const auto p = project_point(pose, pose.look_at);
    REQUIRE(p);
    CHECK(p->pixel.x == doctest::Approx(320.0));
    CHECK(p->pixel.y == doctest::Approx(240.0));
    CHECK(std::hypot(pose.eye.x - pose.look_at.x, pose.eye.y - pose.look_at.y, pose.eye.z - pose.look_at.z) ==
          doctest::Approx(setup.camera.distance));
    const auto hit = unproject_to_plane(pose, p->pixel, pose.look_at.z);
    REQUIRE(hit);
    CHECK(hit->x == doctest::Approx(pose.look_at.x));
    CHECK(hit->y == doctest::Approx(pose.look_at.y));
}

TEST_CASE("rendering is deterministic and sized by the resolution") {
    const auto s = small_chess_scene("none");
    const auto a = render_scene(s);
    const auto b = render_scene(s);
    CHECK(a.width == 320);
    CHECK(a.height == 240);
    CHECK(a == b);
    CHECK(encode_png(a) == encode_png(b));
}

TEST_CASE("png round trip") {
    const auto img = render_scene(small_chess_scene("low"));
    const auto back = decode_png(encode_png(img));
    CHECK(back == img);
    CHECK_THROWS_AS(decode_png({1, 2, 3}), Error);
}

TEST_CASE("blur sigma follows the f-stop") {
    CHECK(blur_sigma(640, 480, 2.0) == doctest::Approx(2.4));
    CHECK(blur_sigma(640, 480, std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("gaussian blur preserves constant images and mean brightness") {
    RasterImage flat(16, 16);
    for (auto& v : flat.pixels) v = 120;
    CHECK(gaussian_blur(flat, 3.0) == flat);
    RasterImage dot(21, 21);
    for (int y = 0; y < 21; ++y)
        for (int x = 0; x < 21; ++x) dot.at(x, y)[3] = 255;
    dot.at(10, 10)[0] = 255;
    const auto blurred = gaussian_blur(dot, 1.0);
    CHECK(blurred.at(10, 10)[0] < 255);
    CHECK(blurred.at(9, 10)[0] == blurred.at(11, 10)[0]);
    CHECK(blurred.at(10, 9)[0] == blurred.at(10, 11)[0]);
    CHECK(std::abs(coverage(blurred) - 1.0) < 0.05);
    CHECK(gaussian_blur(dot, 0.0) == dot);
}

TEST_CASE("high-frequency energy strictly decreases along the blur ladder") {
    double previous = high_frequency_energy(render_scene(small_chess_scene("very_low")));
    CHECK(previous <= high_frequency_energy(render_scene(small_chess_scene("none"))));
    for (const char* level : {"low", "medium", "high", "very_high"}) {
        INFO(level);
        const double e = high_frequency_energy(render_scene(small_chess_scene(level)));
        CHECK(e < previous);
        previous = e;
    }
}

TEST_CASE("brightness scales and clamps") {
    RasterImage img(2, 1);
    img.at(0, 0)[0] = 100;
    img.at(1, 0)[0] = 200;
    const auto out = apply_brightness(img, 1.5);
    CHECK(out.at(0, 0)[0] == 150);
    CHECK(out.at(1, 0)[0] == 255);
    CHECK(mean_gray(apply_brightness(img, 0.5)) < mean_gray(img));
}

TEST_CASE("value noise is a bounded pure function") {
    for (int i = 0; i < 200; ++i) {
        const double v = value_noise(i * 0.37, i * 1.13, 5);
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
        CHECK(v == value_noise(i * 0.37, i * 1.13, 5));
    }
}

TEST_CASE("poker scenes render cards") {
    const auto s = scene::resolve_presets(Json::parse(R"({"game": "poker",
      "setup": {"resolution": {"width": 320, "height": 240}, "camera": {"distance": "close", "angle": "high"}}})"),
                                          4);
    const auto prims = project_scene(s);
    int cards = 0;
    for (const auto& p : prims) cards += p.tag.rfind("card:", 0) == 0 && p.tag.find(':', 5) == std::string::npos;
    CHECK(cards == 9);
    CHECK(render_scene(s).width == 320);
}
