#include <doctest.h>

#include <set>

#include "chess/chess_domain.hpp"
#include "render/camera.hpp"
#include "scene/resolved_scene.hpp"

using namespace scenediag;
using namespace scenediag::chess;

TEST_CASE("piece type names") {
    for (auto t : kAllPieceTypes) CHECK(piece_type_from_string(to_string(t)) == t);
    CHECK(piece_type_from_string("Knight") == PieceType::knight);
    CHECK_FALSE(piece_type_from_string("dragon"));
}

TEST_CASE("cell centers round-trip through world coordinates") {
    for (int rows : {2, 4, 8, 16})
        for (int cols : {2, 8}) {
            BoardSpec spec;
            spec.rows = rows;
            spec.columns = cols;
            spec.location = {0.1, -0.2, 0.9};
            const auto board = generate_board(spec, 1);
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c) {
                    const Vec3 p = cell_to_world(board, r, c);
                    CHECK(p.z == doctest::Approx(0.95));
                    const auto back = world_to_cell(board, p);
                    REQUIRE(back);
                    CHECK(back->row == r);
                    CHECK(back->col == c);
                }
            CHECK_THROWS_AS(cell_to_world(board, rows, 0), Error);
            CHECK_FALSE(world_to_cell(board, {5.0, 5.0, 0.9}));
        }
}

TEST_CASE("checkerboard alternates and the random pattern is seeded") {
    BoardSpec spec;
    const auto board = generate_board(spec, 1);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) CHECK(board.is_dark({r, c}) == ((r + c) % 2 == 1));
    spec.random_pattern = true;
    spec.pattern_seed = 12;
    CHECK(generate_board(spec, 1).dark == generate_board(spec, 2).dark);
}

TEST_CASE("board dimensions must be powers of two") {
    CHECK(is_power_of_two(1));
    CHECK(is_power_of_two(64));
    CHECK_FALSE(is_power_of_two(6));
    CHECK_FALSE(is_power_of_two(0));
    CHECK_THROWS_AS(parse_board_spec(Json::parse(R"({"rows": 6})")), Error);
}

TEST_CASE("count presets resolve inside their bounds") {
    CHECK(preset_count("low", 5, 15) == 5);
    CHECK(preset_count("medium", 5, 15) == 10);
    CHECK(preset_count("high", 5, 15) == 15);
    CHECK(preset_count("low", 1, 21) == 3);
    CHECK(preset_count("high", 1, 21) == 16);
}

TEST_CASE("generated pieces occupy distinct cells with the requested count") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        for (int n : {0, 1, 2, 7, 21, 64}) {
            const auto scene = resolve_chess(Json{{"count_config", n}}, seed);
            REQUIRE(static_cast<int>(scene.pieces.size()) == n);
            std::set<Cell> cells;
            for (const auto& p : scene.pieces) {
                cells.insert(p.cell);
                CHECK(p.world_location == cell_to_world(generate_board(scene.board, seed), p.cell.row, p.cell.col));
            }
            CHECK(static_cast<int>(cells.size()) == n);
        }
    }
    CHECK_THROWS_AS(resolve_chess(Json{{"count_config", 65}}, 1), Error);
}

TEST_CASE("type specs restrict the types drawn") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto scene = resolve_chess(Json::parse(R"({"count_config": 12, "type_config": ["rook", "queen"]})"), seed);
        for (const auto& p : scene.pieces) CHECK((p.type == PieceType::rook || p.type == PieceType::queen));
        const auto single = resolve_chess(Json::parse(R"({"count_config": 5, "type_config": "bishop"})"), seed);
        for (const auto& p : single.pieces) CHECK(p.type == PieceType::bishop);
        const auto low = resolve_chess(Json::parse(R"({"count_config": 8, "type_config": "low"})"), seed);
        std::set<PieceType> kinds;
        for (const auto& p : low.pieces) kinds.insert(p.type);
        CHECK(kinds.size() == 1);
    }
}

TEST_CASE("low spread keeps pieces near the start cell") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto scene = resolve_chess(
            Json::parse(R"({"count_config": 4, "position_config": {"spread_level": "low", "start_point": "corner"}})"), seed);
        for (const auto& p : scene.pieces) {
            CHECK(p.cell.row <= 1);
            CHECK(p.cell.col <= 1);
        }
    }
}

TEST_CASE("allowed positions are honoured") {
    const auto scene = resolve_chess(
        Json::parse(R"({"count_config": 2, "position_config": {"allowed_positions": [[0, 0], [7, 7]]}})"), 3);
    std::set<Cell> cells;
    for (const auto& p : scene.pieces) cells.insert(p.cell);
    CHECK(cells == std::set<Cell>{{0, 0}, {7, 7}});
    CHECK_THROWS_AS(resolve_chess(Json::parse(
                                      R"({"count_config": 3, "position_config": {"allowed_positions": [[0, 0]]}})"),
                                  3),
                    Error);
}

TEST_CASE("color labels split on luminance") {
    CHECK(color_label(kWhitePiece) == "white");
    CHECK(color_label(kBlackPiece) == "black");
    CHECK(color_label({0.5, 0.5, 0.5, 1.0}) == "white");
    CHECK(color_label({0.9, 0.1, 0.1, 1.0}) == "black");
    const auto scene = resolve_chess(Json::parse(R"({"count_config": 9, "color_config": "black"})"), 4);
    for (const auto& p : scene.pieces) CHECK(p.material.color == kBlackPiece);
}

TEST_CASE("explicit piece lists are taken verbatim") {
    const auto scene = resolve_chess(Json::parse(R"({
      "board": {"rows": 4, "columns": 4},
      "pieces": [{"type": "queen", "position": {"row": 3, "col": 0}, "color": [0.2, 0.3, 0.9, 1.0], "scale": 0.2}]
    })"),
                                     1);
    REQUIRE(scene.pieces.size() == 1);
    CHECK(scene.pieces[0].type == PieceType::queen);
    CHECK(scene.pieces[0].cell == Cell{3, 0});
    CHECK(scene.pieces[0].scale == 0.2);
    CHECK_THROWS_AS(resolve_chess(Json::parse(R"({"pieces": [{"type": "queen", "position": [8, 0]}]})"), 1), Error);
}

TEST_CASE("row 0 is the far edge and column 0 the left edge under the default camera") {
    const auto s = scene::resolve_presets(Json::object(), 1);
    const auto pose = render::make_camera_pose(s.setup);
    const auto board = generate_board(s.chess.board, 1);
    const auto near_row = render::project_point(pose, cell_to_world(board, 7, 3));
    const auto far_row = render::project_point(pose, cell_to_world(board, 0, 3));
    const auto left = render::project_point(pose, cell_to_world(board, 3, 0));
    const auto right = render::project_point(pose, cell_to_world(board, 3, 7));
    REQUIRE((near_row && far_row && left && right));
    CHECK(far_row->pixel.y < near_row->pixel.y);
    CHECK(left->pixel.x < right->pixel.x);
}
