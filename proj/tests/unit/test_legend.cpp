#include <doctest.h>

#include <regex>
#include <sstream>

#include "common/log.hpp"
#include "legend/legend.hpp"
#include "support/fuzz.hpp"

using namespace scenediag;
using namespace scenediag::legend;

namespace {

scene::ResolvedScene quiet_resolve(const Json& config, std::uint64_t seed) {
    set_warning_sink([](std::string_view) {});
    auto s = scene::resolve_presets(config, seed);
    set_warning_sink({});
    return s;
}

int count_matches(const std::string& text, const std::string& pattern) {
    const std::regex re(pattern);
    return static_cast<int>(std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
}

}  // namespace

TEST_CASE("json legend round-trips for fuzzed scenes") {
    Rng rng(31);
    for (int i = 0; i < 150; ++i) {
        const Json config = i % 2 ? testing::fuzz_chess_config(rng) : testing::fuzz_poker_config(rng);
        const auto lg = build_legend(quiet_resolve(config, 500 + i));
        const Json doc = render_legend_json(lg);
        CHECK(parse_legend_json(Json::parse(doc.dump())) == lg);
        CHECK(doc["seeds"]["scene"] == 500 + i);
    }
}

TEST_CASE("chess legend lists every piece with its cell") {
    const auto s = quiet_resolve(Json::parse(R"({"chess": {"pieces": [
        {"type": "king", "position": [0, 4], "color": "white"},
        {"type": "pawn", "position": [6, 1], "color": "black"},
        {"type": "pawn", "position": [6, 2], "color": "white"}]}})"),
                                 3);
    const auto lg = build_legend(s);
    CHECK(lg.game == "chess");
    REQUIRE(lg.board);
    CHECK(lg.board->rows == 8);
    REQUIRE(lg.pieces.size() == 3);
    CHECK(lg.pieces[0].type == "king");
    CHECK(lg.pieces[0].row == 0);
    CHECK(lg.pieces[0].col == 4);

    const std::string text = render_legend_text(lg);
    CHECK(text.rfind("CHESS PIECES LEGEND\n", 0) == 0);
    CHECK(text.find("Board: 8x8") != std::string::npos);
    CHECK(text.find("TOTAL PIECES (3)") != std::string::npos);
    CHECK(text.find("KING PIECES (1):") != std::string::npos);
    CHECK(text.find("PAWN PIECES (2):") != std::string::npos);
    CHECK(text.find("QUEEN PIECES (0):") != std::string::npos);
    CHECK(text.find("- KING_1: Board Position: row 0, col 4;") != std::string::npos);
    CHECK(text.find("- PAWN_2: Board Position: row 6, col 2;") != std::string::npos);
    CHECK(count_matches(text, R"(\n- [A-Z]+_\d+: Board Position)") == 3);
}

TEST_CASE("poker legend marks face-down cards") {
    const auto s = quiet_resolve(Json::parse(R"({"game": "poker", "poker": {
        "players": [{"player_id": "Alice", "hand_config": {"card_names": ["AS", "KS"], "n_verso": 1}}],
        "community_cards": {"card_names": ["2H", "3H", "4H"]}}})"),
                                 3);
    const auto lg = build_legend(s);
    CHECK(lg.game == "poker");
    REQUIRE(lg.players.size() == 1);
    CHECK(lg.players[0].player_id == "Alice");
    CHECK(lg.players[0].hand[0].face_up);
    CHECK_FALSE(lg.players[0].hand[1].face_up);
    CHECK(all_cards(lg).size() == 5);
    CHECK(all_cards(lg)[0].card == "2H");

    const std::string text = render_legend_text(lg);
    CHECK(text.rfind("POKER TABLE LEGEND\n", 0) == 0);
    CHECK(text.find("TOTAL CARDS (5)") != std::string::npos);
    CHECK(text.find("Cards: 2H, 3H, 4H") != std::string::npos);
    CHECK(text.find("KS (face down)") != std::string::npos);
    CHECK(text.find("Player: Alice") != std::string::npos);
}

TEST_CASE("legend text and json agree on counts") {
    Rng rng(8);
    for (int i = 0; i < 60; ++i) {
        const Json config = i % 2 ? testing::fuzz_chess_config(rng) : testing::fuzz_poker_config(rng);
        const auto lg = build_legend(quiet_resolve(config, i));
        const std::string text = render_legend_text(lg);
        if (lg.game == "chess") {
            CHECK(text.find("TOTAL PIECES (" + std::to_string(lg.pieces.size()) + ")") != std::string::npos);
            CHECK(count_matches(text, R"(\n- [A-Z]+_\d+: Board Position)") == static_cast<int>(lg.pieces.size()));
        } else {
            CHECK(text.find("TOTAL CARDS (" + std::to_string(all_cards(lg).size()) + ")") != std::string::npos);
        }
        CHECK(text.find("CAMERA:") != std::string::npos);
        CHECK(text.find("SEED: " + std::to_string(i)) != std::string::npos);
    }
}

TEST_CASE("noise record carries the blur f-stop") {
    const auto lg = build_legend(quiet_resolve(Json::parse(R"({"noise": {"blur": "medium"}})"), 1));
    REQUIRE(lg.noise);
    CHECK(lg.noise->blur == "medium");
    CHECK(lg.noise->f_stop == 2.0);
    REQUIRE(lg.camera);
    CHECK(lg.camera->vfov == 50);
}
