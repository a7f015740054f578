#include "support/fuzz.hpp"

#include <string>
#include <vector>

namespace scenediag::testing {

namespace {

int pick(Rng& rng, int lo, int hi) { return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))); }

const char* one_of(Rng& rng, const std::vector<const char*>& options) { return options[rng.below(options.size())]; }

Json level_list(Rng& rng, int n) {
    Json levels = Json::array();
    for (int i = 0; i < n; ++i) {
        if (rng.below(2)) levels.push_back(pick(rng, 0, 50));
        else levels.push_back("level_" + std::to_string(i));
    }
    return levels;
}

}  // namespace

Json fuzz_dataset_document(Rng& rng) {
    Json doc;
    doc["dataset"] = Json{{"name", "fuzz"}, {"seed", rng.below(1000000)}, {"replicates", pick(rng, 1, 3)}};
    Json vars = Json::object();
    const int n_vars = pick(rng, 0, 4);
    for (int i = 0; i < n_vars; ++i) {
        const std::string path = "chess.var_" + std::to_string(i);
        Json v;
        switch (rng.below(4)) {
            case 0:
                v = Json{{"variate_type", "fixed"}, {"variate_levels", pick(rng, 0, 9)}};
                break;
            case 1:
                v = Json{{"variate_type", "varying_all"}, {"variate_levels", level_list(rng, pick(rng, 1, 5))},
                         {"n_images", pick(rng, 1, 4)}};
                break;
            case 2:
                v = Json{{"variate_type", one_of(rng, {"varying_random", "varying_among"})},
                         {"variate_levels", level_list(rng, pick(rng, 1, 5))},
                         {"n_images", pick(rng, 1, 4)}};
                break;
            default: {
                const int lo = pick(rng, -3, 5);
                if (rng.below(2))
                    v = Json{{"variate_type", one_of(rng, {"varying_among_range", "varying_all_range"})},
                             {"variate_levels", Json::array({lo, lo + pick(rng, 0, 4)})}};
                else
                    v = Json{{"variate_type", "varying_among_range"},
                             {"variate_levels", Json::array({lo + 0.5, lo + 2.25})},
                             {"n_images", pick(rng, 1, 4)}};
            }
        }
        vars[path] = v;
    }
    doc["variables"] = vars;
    return doc;
}

Json fuzz_chess_config(Rng& rng) {
    const int rows = 1 << pick(rng, 1, 3);
    const int cols = 1 << pick(rng, 1, 3);
    Json chess;
    chess["board"] = Json{{"rows", rows}, {"columns", cols}};
    const int cells = rows * cols;
    switch (rng.below(4)) {
        case 0: chess["count_config"] = pick(rng, 0, std::min(cells, 21)); break;
        case 1: chess["count_config"] = pick(rng, 1, 2); break;
        case 2:
            chess["count_config"] = Json{{"spec_type", "range"}, {"min_count", 0}, {"max_count", std::min(cells, 8)}};
            break;
        default: chess["count_config"] = Json{{"preset", "low"}, {"min_count", 1}, {"max_count", std::min(cells, 12)}};
    }
    switch (rng.below(3)) {
        case 0: chess["type_config"] = one_of(rng, {"pawn", "rook", "knight", "bishop", "queen", "king"}); break;
        case 1: chess["type_config"] = Json::array({"queen", one_of(rng, {"pawn", "rook", "knight"})}); break;
        default: chess["type_config"] = one_of(rng, {"low", "medium", "high"});
    }
    chess["position_config"] = Json{{"spread_level", one_of(rng, {"low", "medium", "high"})},
                                    {"start_point", one_of(rng, {"center", "corner", "edge"})}};
    chess["color_config"] = one_of(rng, {"random", "white", "black"});
    if (rng.below(4) == 0) chess["color_config"] = Json::array({Json::array({0.9, 0.2, 0.2, 1.0}), "black"});
    return Json{{"game", "chess"}, {"chess", chess}, {"setup", {{"resolution", {{"width", 64}, {"height", 48}}}}}};
}

Json fuzz_poker_config(Rng& rng) {
    Json poker;
    const int mode = static_cast<int>(rng.below(6));
    if (mode == 0) {
        poker["grid"] = Json{{"rows", pick(rng, 1, 5)}, {"cols", pick(rng, 1, 5)}};
    } else {
        const int n_players = pick(rng, 0, 4);
        Json players = Json::array();
        for (int i = 0; i < n_players; ++i) {
            const int n = pick(rng, 0, 4);
            players.push_back(Json{{"player_id", "Player_" + std::to_string(i + 1)},
                                   {"hand_config", {{"n_cards", n}, {"n_verso", n ? pick(rng, 0, n) : 0}}}});
        }
        poker["players"] = players;
        const int community = pick(rng, 0, 5);
        poker["community_cards"] = Json{{"n_cards", community}, {"n_verso", community ? pick(rng, 0, community) : 0}};
        if (mode == 1) {
            const int n = pick(rng, 1, 6);
            poker["overlap"] = Json{{"axis", one_of(rng, {"horizontal", "vertical"})},
                                    {"overlap_fraction", pick(rng, 0, 8) / 10.0},
                                    {"n_cards", n},
                                    {"n_verso", pick(rng, 0, n)}};
        }
        if (mode == 2 && n_players > 0)
            poker["card_distribution_inputs"] = Json{{"overall_cards", pick(rng, 0, 14)}};
    }
    return Json{{"game", "poker"}, {"poker", poker}, {"setup", {{"resolution", {{"width", 64}, {"height", 48}}}}}};
}

}  // namespace scenediag::testing
