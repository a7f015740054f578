#include <doctest.h>

#include "scene/resolved_scene.hpp"
#include "support/fuzz.hpp"

using namespace scenediag;
using namespace scenediag::scene;

TEST_CASE("preset tables") {
    CHECK(preset_value(blur_presets(), "medium", "noise.blur") == 2.0);
    CHECK(preset_value(blur_presets(), "very_low", "noise.blur") == 9.0);
    CHECK(preset_value(blur_presets(), "very_high", "noise.blur") == 0.5);
    CHECK(preset_value(camera_angle_presets(), "low", "camera.angle") == 30.0);
    CHECK(preset_name(camera_distance_presets(), 5.5) == std::optional<std::string_view>("far"));
    CHECK_FALSE(preset_name(camera_distance_presets(), 5.4));
    CHECK(resolution_presets().front().width == 640);
    CHECK(resolution_presets().front().height == 480);
    CHECK_THROWS_AS(preset_value(blur_presets(), "blurry", "noise.blur"), Error);
}

TEST_CASE("default chess scene resolves and validates") {
    const auto s = resolve_presets(Json::object(), 1);
    CHECK(s.game == config::Game::chess);
    CHECK(s.chess.board.rows == 8);
    CHECK(s.chess.board.columns == 8);
    CHECK(s.setup.camera.distance == 3.5);
    CHECK_FALSE(s.noise.blur_enabled());
    CHECK(validate_scene(s).empty());
}

TEST_CASE("flat and sectioned layouts resolve to the same scene") {
    const Json flat = Json::parse(R"({
      "camera": {"distance": "close", "angle": "high"},
      "resolution": "low",
      "board": {"rows": 4, "columns": 4},
      "pieces": [{"type": "king", "position": [1, 2], "color": "white"}]
    })");
    const Json sectioned = Json::parse(R"({
      "setup": {"camera": {"distance": "close", "angle": "high"}, "resolution": "low"},
      "chess": {"board": {"rows": 4, "columns": 4},
                "pieces": [{"type": "king", "position": [1, 2], "color": "white"}]}
    })");
    const auto a = resolve_presets(flat, 7);
    const auto b = resolve_presets(sectioned, 7);
    CHECK(a == b);
    CHECK(a.setup.camera.distance == 2.5);
    CHECK(a.setup.resolution.pixel_width() == 640);
    REQUIRE(a.chess.pieces.size() == 1);
    CHECK(a.chess.pieces[0].cell.row == 1);
    CHECK(a.chess.pieces[0].cell.col == 2);
}

TEST_CASE("game inference") {
    CHECK(resolve_presets(Json::parse(R"({"poker": {"n_players": 1}})"), 1).game == config::Game::poker);
    CHECK(resolve_presets(Json::parse(R"({"game": "poker"})"), 1).game == config::Game::poker);
    CHECK_THROWS_AS(resolve_presets(Json::parse(R"({"game": "go"})"), 1), Error);
}

TEST_CASE("validation lists each violation with its path") {
    const auto s = resolve_presets(Json::parse(R"({
      "setup": {"resolution": {"width": 8, "height": 8},
                "table": {"length": 0.3, "width": 0.3},
                "background": {"use_hdri": true}}
    })"),
                                   1);
    const auto v = validate_scene(s);
    auto mentions = [&](const std::string& path) {
        for (const auto& m : v)
            if (m.rfind(path, 0) == 0) return true;
        return false;
    };
    CHECK(mentions("resolution.width"));
    CHECK(mentions("resolution.height"));
    CHECK(mentions("board"));
    CHECK(mentions("background.use_hdri"));
}

TEST_CASE("noise presets") {
    const auto s = resolve_presets(Json::parse(R"({"noise": {"blur": "medium", "lighting": "low"}})"), 1);
    CHECK(s.noise.blur_fstop == 2.0);
    CHECK(s.noise.blur_preset == "medium");
    CHECK(s.noise.lighting_multiplier == 0.6);
    CHECK(s.noise.lighting_active);
}

TEST_CASE("exported scene specs import to the same scene") {
    Rng rng(77);
    for (int i = 0; i < 100; ++i) {
        const Json config = i % 2 ? testing::fuzz_chess_config(rng) : testing::fuzz_poker_config(rng);
        const auto s = resolve_presets(config, 1000 + i);
        const Json spec = export_scene_spec(s);
        CHECK(spec.contains("setup"));
        CHECK(spec.contains("noise"));
        CHECK(spec.contains("game"));
        const auto back = import_scene_spec(Json::parse(spec.dump()));
        CHECK(back == s);
        CHECK(export_scene_spec(back) == spec);
    }
}

TEST_CASE("resolution is deterministic in the seed") {
    Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        const Json config = testing::fuzz_chess_config(rng);
        CHECK(resolve_presets(config, 55) == resolve_presets(config, 55));
    }
}
