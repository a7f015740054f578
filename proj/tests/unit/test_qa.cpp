#include <doctest.h>

#include <set>

#include "common/errors.hpp"
#include "common/log.hpp"
#include "legend/legend.hpp"
#include "qa/oracle.hpp"
#include "support/brute_force.hpp"
#include "support/fuzz.hpp"
#include "support/temp_dir.hpp"
#include "vlm/answer_parser.hpp"

using namespace scenediag;
using namespace scenediag::qa;

namespace {

scene::ResolvedScene quiet_resolve(const Json& config, std::uint64_t seed) {
    set_warning_sink([](std::string_view) {});
    auto s = scene::resolve_presets(config, seed);
    set_warning_sink({});
    return s;
}

legend::Legend chess_legend(const std::string& pieces) {
    return legend::build_legend(quiet_resolve(Json::parse(R"({"chess": {"pieces": )" + pieces + "}}"), 1));
}

constexpr PrepromptKind kAllPreprompts[] = {PrepromptKind::neutral, PrepromptKind::helpful, PrepromptKind::debiased,
                                            PrepromptKind::cot, PrepromptKind::debiased_cot};
constexpr InstructionKind kAllInstructions[] = {InstructionKind::direct, InstructionKind::declarative,
                                                InstructionKind::missing_word};

}  // namespace

TEST_CASE("shipped bank carries the catalog for both games") {
    const auto& bank = default_question_bank();
    const auto chess = bank.keys(config::Game::chess);
    const auto poker = bank.keys(config::Game::poker);
    const std::set<std::string> c(chess.begin(), chess.end()), p(poker.begin(), poker.end());
    for (auto k : {"count_pieces", "count_identification_white_pieces", "identify_type_one_piece",
                   "localize_row_one_piece", "localize_column_one_piece", "relative_rows_two_pieces",
                   "relative_columns_two_pieces", "board_square_count"})
        CHECK(c.count(k) == 1);
    for (auto k : {"count_total_cards", "count_community_cards", "count_identify_face_up_cards", "identify_cards",
                   "suit_count", "most_cards_player"})
        CHECK(p.count(k) == 1);
    for (const auto& t : bank.templates) {
        CAPTURE(t.key);
        CHECK_FALSE(t.body.empty());
        CHECK_FALSE(t.declarative_stub.empty());
        CHECK(t.fill_blank_stub.find(kBlank) != std::string::npos);
    }
}

TEST_CASE("bank file on disk matches the compiled default") {
    const auto bank = load_question_bank_file(testing::data_path("questions.json"));
    CHECK(bank.templates.size() == default_question_bank().templates.size());
    CHECK(bank.version == default_question_bank().version);
}

TEST_CASE("prompt composition") {
    const auto& bank = default_question_bank();
    const auto lg = chess_legend(R"([{"type": "king", "position": [1, 1]}, {"type": "pawn", "position": [5, 2]}])");
    const auto debiased = instantiate_question(bank, "count_pieces", config::Game::chess, lg, PrepromptKind::debiased,
                                               InstructionKind::declarative);
    CHECK(debiased.prompt ==
          "This is not a real chess game. The number of each piece and their position can vary arbitrary. Just focus "
          "on answering the following question based on the visual content. How many pieces are there in the image? "
          "The number of pieces in the image is:");

    const auto direct = instantiate_question(bank, "count_pieces", config::Game::chess, lg, PrepromptKind::neutral,
                                             InstructionKind::direct);
    CHECK(direct.prompt == "How many pieces are there in the image?");

    const auto blank = instantiate_question(bank, "count_pieces", config::Game::chess, lg, PrepromptKind::neutral,
                                            InstructionKind::missing_word);
    CHECK(blank.prompt == "There are ____ pieces in the image.");

    const auto cot = instantiate_question(bank, "count_pieces", config::Game::chess, lg, PrepromptKind::debiased_cot,
                                          InstructionKind::direct);
    CHECK(cot.prompt.rfind(bank.debiased.at("chess") + " " + bank.cot_prefix, 0) == 0);
    CHECK(cot.prompt.size() > bank.cot_suffix.size());
    CHECK(cot.prompt.substr(cot.prompt.size() - bank.cot_suffix.size()) == bank.cot_suffix);

    CHECK(preprompt_text(bank, PrepromptKind::neutral, config::Game::poker).empty());
    CHECK(preprompt_text(bank, PrepromptKind::helpful, config::Game::chess) == bank.debiased.at("chess"));
}

TEST_CASE("prompts are single-spaced, deterministic and free of placeholders") {
    const auto& bank = default_question_bank();
    Rng rng(77);
    for (int i = 0; i < 40; ++i) {
        const Json config = i % 2 ? testing::fuzz_chess_config(rng) : testing::fuzz_poker_config(rng);
        const auto lg = legend::build_legend(quiet_resolve(config, 900 + i));
        const auto game = lg.game == "chess" ? config::Game::chess : config::Game::poker;
        for (const auto& key : bank.keys(game)) {
            if (!is_applicable(*bank.find(key, game), lg)) continue;
            for (auto pp : kAllPreprompts)
                for (auto in : kAllInstructions) {
                    const auto a = instantiate_question(bank, key, game, lg, pp, in);
                    const auto b = instantiate_question(bank, key, game, lg, pp, in);
                    CHECK(a.prompt == b.prompt);
                    CHECK(a.prompt.find("  ") == std::string::npos);
                    CHECK(a.prompt.find('{' + std::string("suit}")) == std::string::npos);
                    CHECK(a.prompt.find('{' + std::string("card}")) == std::string::npos);
                    CHECK(a.prompt.front() != ' ');
                    CHECK(a.prompt.back() != ' ');
                }
        }
    }
}

TEST_CASE("substitute") {
    CHECK(substitute("How many {suit} are there?", {{"suit", "hearts"}}) == "How many hearts are there?");
    CHECK(substitute("no placeholders", {}) == "no placeholders");
    CHECK_THROWS_AS(substitute("How many {suit}?", {}), Error);
    CHECK_THROWS_AS(substitute("Where is {card}?", {{"suit", "clubs"}}), Error);
}

TEST_CASE("combination grid") {
    CHECK(enumerate_combinations({"a"}, {PrepromptKind::neutral}, {InstructionKind::direct}).size() == 1);
    const auto grid = enumerate_combinations({"a", "b"}, {PrepromptKind::neutral, PrepromptKind::helpful, PrepromptKind::cot},
                                             {InstructionKind::declarative, InstructionKind::missing_word});
    CHECK(grid.size() == 12);
    CHECK(grid.front() == PromptCombination{"a", PrepromptKind::neutral, InstructionKind::declarative});
    CHECK(grid.back() == PromptCombination{"b", PrepromptKind::cot, InstructionKind::missing_word});
    CHECK(enumerate_combinations({"a"}, {PrepromptKind::helpful, PrepromptKind::cot, PrepromptKind::neutral},
                                 {InstructionKind::declarative, InstructionKind::missing_word})
              .size() == 6);
}

TEST_CASE("oracle on hand-built legends") {
    const auto& bank = default_question_bank();
    const auto one = chess_legend(R"([{"type": "queen", "position": [3, 3], "color": "white"}])");
    CHECK(extract_answer(bank, "localize_column_one_piece", config::Game::chess, one).integer == 3);
    CHECK(extract_answer(bank, "localize_row_one_piece", config::Game::chess, one).integer == 3);
    const auto type = extract_answer(bank, "identify_type_one_piece", config::Game::chess, one);
    CHECK(type.kind == AnswerKind::label);
    CHECK(type.label == "queen");

    const auto two = chess_legend(R"([{"type": "rook", "position": [2, 1]}, {"type": "pawn", "position": [6, 5]}])");
    CHECK(extract_answer(bank, "relative_rows_two_pieces", config::Game::chess, two).integer == 4);
    CHECK(extract_answer(bank, "relative_columns_two_pieces", config::Game::chess, two).integer == 4);
    CHECK_THROWS_AS(extract_answer(bank, "localize_row_one_piece", config::Game::chess, two), Error);
    CHECK_FALSE(is_applicable(*bank.find("localize_row_one_piece", config::Game::chess), two));
    CHECK(is_applicable(*bank.find("relative_rows_two_pieces", config::Game::chess), two));

    Json ten = Json::array();
    for (int i = 0; i < 10; ++i) ten.push_back(Json{{"type", "pawn"}, {"position", Json::array({i / 8, i % 8})}});
    const auto lg10 = chess_legend(ten.dump());
    CHECK(extract_answer(bank, "count_pieces", config::Game::chess, lg10).integer == 10);
    CHECK(extract_answer(bank, "board_square_count", config::Game::chess, lg10).integer == 64);

    CHECK_THROWS_AS(extract_answer(bank, "count_total_cards", config::Game::poker, lg10), Error);
    CHECK_THROWS_AS(extract_answer(bank, "no_such_key", config::Game::chess, lg10), Error);
}

TEST_CASE("ground truth json round-trip") {
    GroundTruth g;
    g.kind = AnswerKind::label_list;
    g.labels = {"10H", "AS"};
    g.source = "cards";
    CHECK(ground_truth_from_json(Json::parse(to_json(g).dump())) == g);
    CHECK(answer_text(g) == "10H, AS");
    GroundTruth n;
    n.integer = 7;
    CHECK(answer_text(n) == "7");
    CHECK_THROWS_AS(ground_truth_from_json(Json::parse(R"({"kind": "integer", "value": "x"})")), Error);
}

TEST_CASE("oracle agrees with brute force on fuzzed scenes") {
    const auto& bank = default_question_bank();
    Rng rng(2024);
    int compared = 0;
    for (int i = 0; i < 200; ++i) {
        const Json config = i % 2 ? testing::fuzz_chess_config(rng) : testing::fuzz_poker_config(rng);
        const auto scene = quiet_resolve(config, 4000 + i);
        const auto lg = legend::build_legend(scene);
        for (const auto& key : bank.keys(scene.game)) {
            CAPTURE(key);
            CAPTURE(i);
            const auto* t = bank.find(key, scene.game);
            const bool applicable = is_applicable(*t, lg);
            const auto bindings = applicable ? bind_variables(*t, lg) : std::map<std::string, std::string>{};
            const auto brute = testing::brute_force_answer(key, scene, bindings);
            CHECK(applicable == brute.has_value());
            if (!brute) continue;
            const auto g = extract_answer(*t, lg, substitute(t->body, bindings));
            CHECK(g.kind == brute->kind);
            CHECK(g.integer == brute->integer);
            CHECK(g.label == brute->label);
            CHECK(g.labels == brute->labels);
            ++compared;
        }
    }
    CHECK(compared > 1000);
}

TEST_CASE("oracle response parses back to the ground truth") {
    const auto& bank = default_question_bank();
    Rng rng(88);
    for (int i = 0; i < 60; ++i) {
        const Json config = i % 2 ? testing::fuzz_chess_config(rng) : testing::fuzz_poker_config(rng);
        const auto lg = legend::build_legend(quiet_resolve(config, 7000 + i));
        const auto game = lg.game == "chess" ? config::Game::chess : config::Game::poker;
        for (const auto& key : bank.keys(game)) {
            const auto* t = bank.find(key, game);
            if (!is_applicable(*t, lg)) continue;
            for (auto pp : kAllPreprompts)
                for (auto in : kAllInstructions) {
                    CAPTURE(key);
                    const auto q = instantiate_question(bank, key, game, lg, pp, in);
                    const auto truth = extract_answer(*t, lg, q.question);
                    const auto response = oracle_response(*t, q, truth);
                    const auto parsed = vlm::parse_answer(response, t->answer, in, pp, vocabulary(*t, lg));
                    CAPTURE(response);
                    REQUIRE(parsed.parsed());
                    if (truth.kind == AnswerKind::integer) CHECK(parsed.integer == truth.integer);
                    if (truth.kind == AnswerKind::label) CHECK(parsed.label == truth.label);
                    if (truth.kind == AnswerKind::label_list) CHECK(parsed.labels == truth.labels);
                }
        }
    }
}

TEST_CASE("bank documents are validated") {
    CHECK_THROWS_AS(load_question_bank(Json::parse(R"({"version": "x"})")), Error);
    CHECK_THROWS_AS(load_question_bank_file("/nonexistent/questions.json"), Error);
    Json doc = Json::parse(testing::slurp(testing::data_path("questions.json")));
    doc["questions"]["chess"][0].erase("missing_word");
    CHECK_THROWS_AS(load_question_bank(doc), Error);
}
