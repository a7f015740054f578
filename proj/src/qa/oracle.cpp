#include "qa/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>

#include "chess/chess_domain.hpp"
#include "poker/poker_domain.hpp"

namespace scenediag::qa {

namespace {

using legend::Legend;

GroundTruth integer_truth(long long v) {
    GroundTruth g;
    g.kind = AnswerKind::integer;
    g.integer = v;
    return g;
}

GroundTruth label_truth(std::string label) {
    GroundTruth g;
    g.kind = AnswerKind::label;
    g.label = std::move(label);
    return g;
}

GroundTruth list_truth(std::vector<std::string> labels) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    GroundTruth g;
    g.kind = AnswerKind::label_list;
    g.labels = std::move(labels);
    return g;
}

void require_game(const QuestionTemplate& t, const Legend& l) {
    if (std::string(config::to_string(t.game)) != l.game)
        fail_validation("question '" + t.key + "': legend is a " + l.game + " scene");
}

const legend::PieceRecord& single_piece(const QuestionTemplate& t, const Legend& l) {
    if (l.pieces.size() != 1)
        fail_validation("question '" + t.key + "': needs exactly one piece, legend has " +
                        std::to_string(l.pieces.size()));
    return l.pieces.front();
}

std::pair<const legend::PieceRecord*, const legend::PieceRecord*> two_pieces(const QuestionTemplate& t,
                                                                             const Legend& l) {
    if (l.pieces.size() != 2)
        fail_validation("question '" + t.key + "': needs exactly two pieces, legend has " +
                        std::to_string(l.pieces.size()));
    return {&l.pieces[0], &l.pieces[1]};
}

const legend::GridRecord& grid(const QuestionTemplate& t, const Legend& l) {
    if (!l.grid) fail_validation("question '" + t.key + "': legend has no card grid");
    return *l.grid;
}

std::string color_of(const Rgba& c) { return std::string(chess::color_label(c)); }

std::string color_in_text(const QuestionTemplate& t, std::string_view text) {
    static const std::regex re(R"(\b(white|black)\b)", std::regex::icase);
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_search(text.begin(), text.end(), m, re))
        fail_validation("question '" + t.key + "': no color found in the question text");
    std::string c = m[1].str();
    for (auto& ch : c) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return c;
}

char suit_in_text(const QuestionTemplate& t, std::string_view text) {
    static const std::regex re(R"(\b(spades?|hearts?|diamonds?|clubs?)\b)", std::regex::icase);
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_search(text.begin(), text.end(), m, re))
        fail_validation("question '" + t.key + "': no suit found in the question text");
    std::string s = m[1].str();
    for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    auto suit = poker::suit_from_name(s);
    if (!suit) fail_validation("question '" + t.key + "': unknown suit '" + s + "'");
    return *suit;
}

GroundTruth route(const QuestionTemplate& t, const Legend& l, std::string_view text) {
    const std::string& h = t.oracle;
    if (h == "piece_count") return integer_truth(static_cast<long long>(l.pieces.size()));
    if (h == "piece_count_by_color") {
        const std::string color = color_in_text(t, text);
        return integer_truth(std::count_if(l.pieces.begin(), l.pieces.end(),
                                           [&](const auto& p) { return color_of(p.color) == color; }));
    }
    if (h == "single_piece_type") return label_truth(single_piece(t, l).type);
    if (h == "single_piece_color") return label_truth(color_of(single_piece(t, l).color));
    if (h == "piece_type_set") {
        std::vector<std::string> types;
        for (const auto& p : l.pieces) types.push_back(p.type);
        if (types.empty()) fail_validation("question '" + t.key + "': no pieces on the board");
        return list_truth(types);
    }
    if (h == "single_piece_row") return integer_truth(single_piece(t, l).row);
    if (h == "single_piece_column") return integer_truth(single_piece(t, l).col);
    if (h == "row_distance") {
        auto [a, b] = two_pieces(t, l);
        return integer_truth(std::abs(a->row - b->row));
    }
    if (h == "column_distance") {
        auto [a, b] = two_pieces(t, l);
        return integer_truth(std::abs(a->col - b->col));
    }
    if (h == "square_count") {
        if (!l.board) fail_validation("question '" + t.key + "': legend has no board");
        return integer_truth(static_cast<long long>(l.board->rows) * l.board->columns);
    }
    if (h == "card_count") return integer_truth(static_cast<long long>(legend::all_cards(l).size()));
    if (h == "community_count") return integer_truth(static_cast<long long>(l.community.size()));
    if (h == "face_up_count") {
        const auto cards = legend::all_cards(l);
        return integer_truth(std::count_if(cards.begin(), cards.end(), [](const auto& c) { return c.face_up; }));
    }
    if (h == "face_up_cards") {
        std::vector<std::string> labels;
        for (const auto& c : legend::all_cards(l))
            if (c.face_up) labels.push_back(c.card);
        if (labels.empty()) fail_validation("question '" + t.key + "': no face-up cards");
        return list_truth(labels);
    }
    if (h == "suit_count") {
        const char suit = suit_in_text(t, text);
        long long n = 0;
        for (const auto& c : legend::all_cards(l)) {
            auto card = poker::parse_card(c.card);
            if (c.face_up && card && card->suit == suit) ++n;
        }
        return integer_truth(n);
    }
    if (h == "most_cards_player") {
        if (l.players.empty()) fail_validation("question '" + t.key + "': legend has no players");
        std::size_t best = 0;
        bool tie = false;
        for (std::size_t i = 1; i < l.players.size(); ++i) {
            const auto n = l.players[i].hand.size(), m = l.players[best].hand.size();
            if (n > m) {
                best = i;
                tie = false;
            } else if (n == m) {
                tie = true;
            }
        }
        if (tie) fail_validation("question '" + t.key + "': several players share the largest hand");
        return label_truth(l.players[best].player_id);
    }
    if (h == "grid_row") return integer_truth(grid(t, l).row);
    if (h == "grid_column") return integer_truth(grid(t, l).col);
    fail_validation("question '" + t.key + "': unknown oracle handler '" + h + "'");
}

}  // namespace

Json to_json(const GroundTruth& g) {
    Json j{{"kind", std::string(to_string(g.kind))}};
    switch (g.kind) {
        case AnswerKind::integer: j["value"] = g.integer; break;
        case AnswerKind::label: j["value"] = g.label; break;
        case AnswerKind::label_list: j["value"] = g.labels; break;
    }
    if (!g.source.empty()) j["source"] = g.source;
    return j;
}

GroundTruth ground_truth_from_json(const Json& j) {
    if (!j.is_object()) fail_validation("ground truth: expected a mapping");
    auto kind = answer_kind_from_string(get_or<std::string>(j, "kind", "", "ground truth"));
    if (!kind) fail_validation("ground truth.kind: expected integer, label or label_list");
    GroundTruth g;
    g.kind = *kind;
    const Json v = j.value("value", Json());
    try {
        switch (g.kind) {
            case AnswerKind::integer: g.integer = v.get<long long>(); break;
            case AnswerKind::label: g.label = v.get<std::string>(); break;
            case AnswerKind::label_list: g.labels = v.get<std::vector<std::string>>(); break;
        }
    } catch (const nlohmann::json::exception&) {
        fail_validation("ground truth.value: does not match kind " + std::string(to_string(g.kind)));
    }
    g.source = get_or<std::string>(j, "source", "", "ground truth");
    return g;
}

std::string answer_text(const GroundTruth& g) {
    switch (g.kind) {
        case AnswerKind::integer: return std::to_string(g.integer);
        case AnswerKind::label: return g.label;
        case AnswerKind::label_list: {
            std::string out;
            for (std::size_t i = 0; i < g.labels.size(); ++i) out += (i ? ", " : "") + g.labels[i];
            return out;
        }
    }
    return "";
}

std::map<std::string, std::string> bind_variables(const QuestionTemplate& t, const Legend& l) {
    std::map<std::string, std::string> out;
    for (const auto& name : t.variables) {
        if (name == "suit") {
            std::string suit = "spades";
            for (const auto& c : legend::all_cards(l)) {
                auto card = poker::parse_card(c.card);
                if (c.face_up && card) {
                    suit = std::string(poker::suit_name(card->suit));
                    break;
                }
            }
            out[name] = suit;
        } else if (name == "card") {
            out[name] = grid(t, l).card.card;
        } else {
            fail_validation("question '" + t.key + "': no legend binding for placeholder {" + name + "}");
        }
    }
    return out;
}

std::vector<std::string> vocabulary(const QuestionTemplate& t, const Legend& l) {
    std::vector<std::string> out;
    if (t.vocabulary == "piece_types") {
        for (auto p : chess::kAllPieceTypes) out.emplace_back(chess::to_string(p));
    } else if (t.vocabulary == "colors") {
        out = {"white", "black"};
    } else if (t.vocabulary == "cards") {
        for (const auto& c : poker::full_deck()) out.push_back(poker::encode(c));
    } else if (t.vocabulary == "players") {
        for (const auto& p : l.players) out.push_back(p.player_id);
    }
    return out;
}

GroundTruth extract_answer(const QuestionTemplate& t, const Legend& l, std::string_view question_text) {
    require_game(t, l);
    std::string text(question_text);
    if (text.empty()) text = substitute(t.body, bind_variables(t, l));
    return route(t, l, text);
}

GroundTruth extract_answer(const QuestionBank& bank, std::string_view key, config::Game game, const Legend& l,
                           std::string_view question_text) {
    const QuestionTemplate* t = bank.find(key, game);
    if (!t) fail_validation("unknown question key '" + std::string(key) + "' for " + std::string(config::to_string(game)));
    return extract_answer(*t, l, question_text);
}

bool is_applicable(const QuestionTemplate& t, const Legend& l) {
    try {
        extract_answer(t, l);
        return true;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::validation) throw;
        return false;
    }
}

RenderedQuestion instantiate_question(const QuestionBank& bank, std::string_view key, config::Game game,
                                      const Legend& l, PrepromptKind preprompt, InstructionKind instruction) {
    const QuestionTemplate* t = bank.find(key, game);
    if (!t) fail_validation("unknown question key '" + std::string(key) + "' for " + std::string(config::to_string(game)));
    if (std::string(config::to_string(game)) != l.game)
        fail_validation("question '" + t->key + "': legend is a " + l.game + " scene");
    return render_question(bank, *t, preprompt, instruction, bind_variables(*t, l));
}

std::string oracle_response(const QuestionTemplate& t, const RenderedQuestion& q, const GroundTruth& truth) {
    const std::string x = answer_text(truth);
    if (uses_cot(q.preprompt)) return "{answer : " + x + "}";
    if (q.instruction == InstructionKind::missing_word) {
        std::string s = substitute(t.fill_blank_stub, q.bindings);
        s.replace(s.find(kBlank), kBlank.size(), x);
        return s;
    }
    return substitute(t.declarative_stub, q.bindings) + " " + x;
}

}  // namespace scenediag::qa
