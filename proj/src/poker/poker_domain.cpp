#include "poker/poker_domain.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "common/errors.hpp"
#include "common/log.hpp"

namespace scenediag::poker {

namespace {

constexpr std::array<char, 4> kSuits{'S', 'H', 'D', 'C'};
constexpr std::array<std::string_view, 4> kSuitNames{"spades", "hearts", "diamonds", "clubs"};

std::string rank_text(int rank) {
    switch (rank) {
        case 11: return "J";
        case 12: return "Q";
        case 13: return "K";
        case 14: return "A";
        default: return std::to_string(rank);
    }
}

std::vector<std::string> names_from_json(const Json& j, std::string_view path) {
    std::vector<std::string> out;
    if (j.is_null()) return out;
    if (!j.is_array()) fail_validation(std::string(path) + ": expected a list of card names");
    for (const auto& e : j) {
        if (!e.is_string() || !parse_card(e.get<std::string>()))
            fail_validation(std::string(path) + ": invalid card " + e.dump());
        out.push_back(encode(*parse_card(e.get<std::string>())));
    }
    return out;
}

Vec3 lift(Vec3 p, std::size_t k) { return {p.x, p.y, p.z + kCardEpsilon * static_cast<double>(k)}; }

std::vector<PlacedCard> place_row(const std::vector<Card>& cards, Vec3 start, const std::vector<Vec2>& offsets,
                                  int n_verso) {
    std::vector<PlacedCard> out;
    for (std::size_t k = 0; k < cards.size(); ++k) {
        PlacedCard pc;
        pc.card = cards[k];
        pc.position = lift({start.x + offsets[k].x, start.y + offsets[k].y, start.z}, k);
        pc.face_up = static_cast<int>(k) < static_cast<int>(cards.size()) - n_verso;
        out.push_back(pc);
    }
    return out;
}

std::vector<Vec2> uniform_offsets(std::size_t n, Vec2 stride) {
    std::vector<Vec2> out;
    for (std::size_t k = 0; k < n; ++k) out.push_back(stride * static_cast<double>(k));
    return out;
}

Vec2 overlap_stride(const OverlapSpec& o, CardGeometry g) {
    if (!(o.overlap_fraction >= 0.0 && o.overlap_fraction < 1.0))
        fail_validation("poker.overlap.overlap_fraction: must lie in [0, 1)");
    return o.axis == OverlapAxis::horizontal ? Vec2{0.0, g.width * (1.0 - o.overlap_fraction)}
                                             : Vec2{g.height * (1.0 - o.overlap_fraction), 0.0};
}

struct PlayerPlan {
    std::string player_id;
    HandSpec hand;
    bool explicit_location = false;
    Json chip_config;
};

Json card_row_json(const std::vector<PlacedCard>& cards) {
    Json arr = Json::array();
    for (const auto& c : cards) arr.push_back(to_json(c));
    return arr;
}

PlacedCard placed_from_json(const Json& j, std::string_view path) {
    if (!j.is_object()) fail_validation(std::string(path) + ": expected a card record");
    PlacedCard pc;
    const std::string name = get_or<std::string>(j, "card", "", path);
    auto card = parse_card(name);
    if (!card) fail_validation(std::string(path) + ".card: invalid card '" + name + "'");
    pc.card = *card;
    pc.position = vec3_from_json(j.value("position", Json()), std::string(path) + ".position");
    pc.rotation = get_or<double>(j, "rotation", 0.0, path);
    pc.face_up = get_or<bool>(j, "face_up", true, path);
    return pc;
}

std::vector<PlacedCard> row_from_json(const Json& j, std::string_view path) {
    std::vector<PlacedCard> out;
    if (j.is_null()) return out;
    if (!j.is_array()) fail_validation(std::string(path) + ": expected a list of cards");
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(placed_from_json(j[i], std::string(path) + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<Rgba> color_options(const Json& j) {
    std::vector<Rgba> out;
    if (j.is_null()) return out;
    if (j.is_array() && !j.empty() && j[0].is_number()) return {scene::parse_color(j, "poker.chip_distribution_inputs.color_options")};
    if (j.is_string()) return {scene::parse_color(j, "poker.chip_distribution_inputs.color_options")};
    if (!j.is_array()) fail_validation("poker.chip_distribution_inputs.color_options: expected a color or a list of colors");
    for (const auto& e : j) out.push_back(scene::parse_color(e, "poker.chip_distribution_inputs.color_options"));
    return out;
}

std::vector<ChipPile> build_chips(const Json& area, const Json& defaults, Vec3 center, Rng& rng) {
    std::vector<ChipPile> piles;
    const Json base_pile = area.value("base_pile_config", Json::object());
    const Json base_chip = base_pile.value("base_chip_config", Json::object());
    const std::vector<Rgba> options = color_options(defaults.value("color_options", Json()));

    const int n_piles = get_or<int>(area, "n_piles", get_or<int>(defaults, "n_piles", 2, "poker.chip_distribution_inputs"),
                                    "chip_area_config");
    if (n_piles < 0) fail_validation("chip_area_config.n_piles: must be >= 0");
    const int base_chips = get_or<int>(base_pile, "n_chips", get_or<int>(defaults, "n_chips", 8, "poker.chip_distribution_inputs"),
                                       "chip_area_config.base_pile_config");
    const double base_spread = get_or<double>(base_pile, "spread_factor", 0.1, "chip_area_config.base_pile_config");
    const double scale = get_or<double>(base_chip, "scale", get_or<double>(defaults, "chip_scale", 0.06, "poker.chip_distribution_inputs"),
                                        "base_chip_config");
    Rgba base_color{0.1, 0.2, 0.8, 1.0};
    if (auto it = base_chip.find("color"); it != base_chip.end()) base_color = scene::parse_color(*it, "base_chip_config.color");

    const Json counts = area.value("n_chips_per_pile", defaults.value("n_chips_per_pile", Json()));
    const Json colors = area.value("pile_colors", Json());
    const Json spreads = area.value("pile_spreads", Json());
    for (const auto* list : {&counts, &colors, &spreads})
        if (!list->is_null() && (!list->is_array() || static_cast<int>(list->size()) != n_piles))
            fail_validation("chip_area_config: per-pile lists must have n_piles entries");

    const double radius = scale / 3.0;
    double cursor = 0.0;
    std::vector<double> xs;
    for (int i = 0; i < n_piles; ++i) {
        ChipPile pile;
        pile.scale = scale;
        pile.n_chips = counts.is_null() || counts[i].is_null() ? base_chips : counts[i].get<int>();
        if (pile.n_chips < 0) fail_validation("chip_area_config.n_chips_per_pile: counts must be >= 0");
        if (!colors.is_null() && !colors[i].is_null()) pile.color = scene::parse_color(colors[i], "chip_area_config.pile_colors");
        else if (!options.empty()) pile.color = options[rng.below(options.size())];
        else pile.color = base_color;
        const double spread = spreads.is_null() || spreads[i].is_null() ? base_spread : spreads[i].get<double>();
        xs.push_back(cursor);
        cursor += 2.0 * radius * (1.0 + spread);
        piles.push_back(pile);
    }
    const double shift = xs.empty() ? 0.0 : xs.back() / 2.0;
    for (int i = 0; i < n_piles; ++i) piles[i].position = {center.x + xs[i] - shift, center.y, center.z};
    return piles;
}

HandSpec parse_hand(const Json& j, const HandSpec& fallback, std::string_view path) {
    HandSpec h = fallback;
    if (j.is_null()) return h;
    if (!j.is_object()) fail_validation(std::string(path) + ": expected a mapping");
    h.card_names = names_from_json(j.value("card_names", Json()), std::string(path) + ".card_names");
    h.n_cards = get_or<int>(j, "n_cards", h.card_names.empty() ? h.n_cards : static_cast<int>(h.card_names.size()), path);
    if (auto it = j.find("location"); it != j.end() && !it->is_null())
        h.location = vec3_from_json(*it, std::string(path) + ".location");
    h.scale = get_or<double>(j, "scale", h.scale, path);
    h.spread_factor_h = get_or<double>(j, "spread_factor_h", h.spread_factor_h, path);
    h.spread_factor_v = get_or<double>(j, "spread_factor_v", h.spread_factor_v, path);
    h.n_verso = get_or<int>(j, "n_verso", h.n_verso, path);
    if (auto it = j.find("random_seed"); it != j.end() && !it->is_null()) h.random_seed = it->get<std::uint64_t>();
    return h;
}

void check_hand(const HandSpec& h, std::string_view path) {
    if (h.n_cards < 0) fail_validation(std::string(path) + ".n_cards: must be >= 0");
    if (h.n_verso < 0 || h.n_verso > h.n_cards) fail_validation(std::string(path) + ".n_verso: must lie in [0, n_cards]");
    if (!h.card_names.empty() && static_cast<int>(h.card_names.size()) != h.n_cards)
        fail_validation(std::string(path) + ".card_names: length differs from n_cards");
    if (!(h.scale > 0)) fail_validation(std::string(path) + ".scale: must be positive");
}

}  // namespace

std::string encode(Card card) { return rank_text(card.rank) + card.suit; }

std::optional<Card> parse_card(std::string_view text) {
    if (text.size() < 2 || text.size() > 3) return std::nullopt;
    const char suit = static_cast<char>(std::toupper(static_cast<unsigned char>(text.back())));
    if (std::find(kSuits.begin(), kSuits.end(), suit) == kSuits.end()) return std::nullopt;
    std::string r(text.substr(0, text.size() - 1));
    for (auto& c : r) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    int rank = 0;
    if (r == "J") rank = 11;
    else if (r == "Q") rank = 12;
    else if (r == "K") rank = 13;
    else if (r == "A") rank = 14;
    else if (r == "10") rank = 10;
    else if (r.size() == 1 && r[0] >= '2' && r[0] <= '9') rank = r[0] - '0';
    else return std::nullopt;
    return Card{rank, suit};
}

const std::vector<Card>& full_deck() {
    static const std::vector<Card> deck = [] {
        std::vector<Card> d;
        for (char s : kSuits)
            for (int r = 2; r <= 14; ++r) d.push_back({r, s});
        return d;
    }();
    return deck;
}

std::string_view suit_name(char suit) {
    for (std::size_t i = 0; i < kSuits.size(); ++i)
        if (kSuits[i] == suit) return kSuitNames[i];
    return "";
}

std::optional<char> suit_from_name(std::string_view name) {
    std::string n;
    for (char c : name) n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    for (std::size_t i = 0; i < kSuits.size(); ++i) {
        const std::string_view full = kSuitNames[i];
        if (n == full || n == full.substr(0, full.size() - 1)) return kSuits[i];
    }
    return std::nullopt;
}

CardGeometry card_geometry(double scale) { return {0.063 * scale / 0.1, 0.088 * scale / 0.1}; }

std::string_view to_string(OverlapAxis axis) { return axis == OverlapAxis::horizontal ? "horizontal" : "vertical"; }

std::vector<Card> deal_cards(int n, const std::set<Card>& exclude, std::uint64_t seed) {
    std::vector<Card> deck;
    for (const auto& c : full_deck())
        if (!exclude.count(c)) deck.push_back(c);
    if (n < 0 || static_cast<std::size_t>(n) > deck.size())
        fail_validation("deck exhausted: " + std::to_string(n) + " cards requested, " + std::to_string(deck.size()) +
                        " available");
    Rng rng(seed);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(deck.size() - i));
        std::swap(deck[i], deck[j]);
    }
    deck.resize(static_cast<std::size_t>(n));
    return deck;
}

std::vector<PlacedCard> layout_cards(const std::vector<Card>& cards, const HandSpec& spec,
                                     const std::optional<OverlapSpec>& overlap) {
    const CardGeometry g = card_geometry(spec.scale);
    const Vec2 stride = overlap ? overlap_stride(*overlap, g)
                                : Vec2{g.height * spec.spread_factor_v, g.width * (1.0 + spec.spread_factor_h)};
    return place_row(cards, spec.location, uniform_offsets(cards.size(), stride), spec.n_verso);
}

std::vector<PlacedCard> layout_cards(const std::vector<Card>& cards, const CommunitySpec& spec,
                                     const std::optional<OverlapSpec>& overlap, Rng* jitter) {
    if (spec.card_gap.base_gap_x < 0 || spec.card_gap.base_gap_y < 0)
        fail_validation("poker.community_cards.card_gap: gaps must be >= 0");
    if (overlap) {
        const CardGeometry g = card_geometry(spec.scale);
        return place_row(cards, spec.start_location, uniform_offsets(cards.size(), overlap_stride(*overlap, g)),
                         spec.n_verso);
    }
    std::vector<Vec2> offsets;
    Vec2 cursor;
    for (std::size_t k = 0; k < cards.size(); ++k) {
        offsets.push_back(cursor);
        double f = 1.0;
        if (spec.card_gap.random_gap && jitter) f = 1.0 + 0.2 * (2.0 * jitter->uniform01() - 1.0);
        cursor = cursor + Vec2{spec.card_gap.base_gap_x * f, spec.card_gap.base_gap_y * f};
    }
    return place_row(cards, spec.start_location, offsets, spec.n_verso);
}

std::size_t total_card_count(const PokerScene& scene) {
    std::size_t n = scene.community.size();
    for (const auto& p : scene.players) n += p.hand.size();
    if (scene.overlap) n += scene.overlap->cards.size();
    if (scene.grid) n += 1;
    return n;
}

std::vector<PlacedCard> all_cards(const PokerScene& scene) {
    std::vector<PlacedCard> out(scene.community.begin(), scene.community.end());
    for (const auto& p : scene.players) out.insert(out.end(), p.hand.begin(), p.hand.end());
    if (scene.overlap) out.insert(out.end(), scene.overlap->cards.begin(), scene.overlap->cards.end());
    if (scene.grid) out.push_back(scene.grid->card);
    return out;
}

Vec2 layout_extent(const std::vector<PlacedCard>& cards, CardGeometry size) {
    if (cards.empty()) return {};
    double x0 = cards[0].position.x, x1 = x0, y0 = cards[0].position.y, y1 = y0;
    for (const auto& c : cards) {
        x0 = std::min(x0, c.position.x);
        x1 = std::max(x1, c.position.x);
        y0 = std::min(y0, c.position.y);
        y1 = std::max(y1, c.position.y);
    }
    return {x1 - x0 + size.height, y1 - y0 + size.width};
}

std::vector<std::string> out_of_table(const PokerScene& scene, const scene::Table& table) {
    std::vector<std::string> out;
    const double hx = table.length / 2.0, hy = table.width / 2.0;
    const double cw = scene.card_size.height / 2.0, ch = scene.card_size.width / 2.0;
    for (const auto& c : all_cards(scene)) {
        bool inside = true;
        for (double sx : {-1.0, 1.0}) {
            for (double sy : {-1.0, 1.0}) {
                const double x = c.position.x + sx * cw, y = c.position.y + sy * ch;
                if (table.shape == scene::TableShape::rectangular) inside = inside && std::abs(x) <= hx && std::abs(y) <= hy;
                else inside = inside && (x * x) / (hx * hx) + (y * y) / (hy * hy) <= 1.0;
            }
        }
        if (!inside) out.push_back(encode(c.card));
    }
    return out;
}

PokerScene resolve_poker(const Json& section_in, const scene::Table& table, std::uint64_t seed) {
    const Json section = section_in.is_null() ? Json::object() : section_in;
    if (!section.is_object()) fail_validation("poker: expected a mapping");
    if (auto it = section.find("layout"); it != section.end() && !it->is_null()) return poker_scene_from_json(*it);

    PokerScene scene;
    const double card_scale = get_or<double>(section, "card_scale", 0.1, "poker");
    if (!(card_scale > 0)) fail_validation("poker.card_scale: must be positive");
    scene.card_size = card_geometry(card_scale);
    const double surface = table.height + 0.01;

    // Grid mode: a single card on a drawn grid, nothing else on the table.
    if (auto it = section.find("grid"); it != section.end() && !it->is_null()) {
        const Json& gj = *it;
        if (!gj.is_object()) fail_validation("poker.grid: expected a mapping");
        GridPlacement grid;
        grid.rows = get_or<int>(gj, "rows", 3, "poker.grid");
        grid.cols = get_or<int>(gj, "cols", 3, "poker.grid");
        grid.size = get_or<double>(gj, "size", 0.6, "poker.grid");
        grid.center = {0.0, 0.0, surface};
        if (grid.rows < 1 || grid.cols < 1) fail_validation("poker.grid: rows and cols must be positive");
        Rng rng(derive_seed(seed, 11));
        grid.row = get_or<int>(gj, "row", static_cast<int>(rng.below(static_cast<std::uint64_t>(grid.rows))), "poker.grid");
        grid.col = get_or<int>(gj, "col", static_cast<int>(rng.below(static_cast<std::uint64_t>(grid.cols))), "poker.grid");
        if (grid.row < 0 || grid.row >= grid.rows || grid.col < 0 || grid.col >= grid.cols)
            fail_validation("poker.grid: target cell outside the grid");
        Card card;
        if (auto c = gj.find("card"); c != gj.end() && !c->is_null()) {
            auto parsed = c->is_string() ? parse_card(c->get<std::string>()) : std::nullopt;
            if (!parsed) fail_validation("poker.grid.card: invalid card " + c->dump());
            card = *parsed;
        } else {
            card = deal_cards(1, {}, derive_seed(seed, 12)).front();
        }
        const double pitch_r = grid.size / grid.rows, pitch_c = grid.size / grid.cols;
        grid.card.card = card;
        grid.card.position = {grid.center.x - grid.size / 2 + (grid.row + 0.5) * pitch_r,
                              grid.center.y - grid.size / 2 + (grid.col + 0.5) * pitch_c, surface + kCardEpsilon};
        scene.grid = grid;
        return scene;
    }

    // Players.
    std::vector<PlayerPlan> plans;
    const int cards_per_player = get_or<int>(section, "cards_per_player", 2, "poker");
    HandSpec default_hand;
    default_hand.n_cards = cards_per_player;
    default_hand.scale = card_scale;
    if (auto it = section.find("players"); it != section.end() && !it->is_null()) {
        if (!it->is_array()) fail_validation("poker.players: expected a list");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const Json& pj = (*it)[i];
            const std::string where = "poker.players[" + std::to_string(i) + "]";
            PlayerPlan plan;
            plan.player_id = get_or<std::string>(pj, "player_id", "Player_" + std::to_string(i + 1), where);
            const Json hand = pj.value("hand_config", Json());
            plan.hand = parse_hand(hand, default_hand, where + ".hand_config");
            plan.explicit_location = hand.is_object() && hand.contains("location");
            plan.chip_config = pj.value("chip_area_config", Json());
            plans.push_back(std::move(plan));
        }
    } else {
        const int n_players = get_or<int>(section, "n_players", 2, "poker");
        if (n_players < 0) fail_validation("poker.n_players: must be >= 0");
        for (int i = 0; i < n_players; ++i) {
            PlayerPlan plan;
            plan.player_id = "Player_" + std::to_string(i + 1);
            plan.hand = default_hand;
            plans.push_back(std::move(plan));
        }
    }

    CommunitySpec community;
    community.scale = card_scale;
    community.start_location = {-0.3, 0.0, surface};
    if (auto it = section.find("community_cards"); it != section.end() && !it->is_null()) {
        const Json& cj = *it;
        if (cj.is_number_integer()) {
            community.n_cards = cj.get<int>();
        } else if (cj.is_object()) {
            community.card_names = names_from_json(cj.value("card_names", Json()), "poker.community_cards.card_names");
            community.n_cards = get_or<int>(cj, "n_cards",
                                            community.card_names.empty() ? 5 : static_cast<int>(community.card_names.size()),
                                            "poker.community_cards");
            if (auto s = cj.find("start_location"); s != cj.end() && !s->is_null())
                community.start_location = vec3_from_json(*s, "poker.community_cards.start_location");
            community.scale = get_or<double>(cj, "scale", community.scale, "poker.community_cards");
            community.n_verso = get_or<int>(cj, "n_verso", 0, "poker.community_cards");
            const Json gap = cj.value("card_gap", Json::object());
            community.card_gap.base_gap_x = get_or<double>(gap, "base_gap_x", 0.15, "poker.community_cards.card_gap");
            community.card_gap.base_gap_y = get_or<double>(gap, "base_gap_y", 0.005, "poker.community_cards.card_gap");
            community.card_gap.random_gap = get_or<bool>(gap, "random_gap", false, "poker.community_cards.card_gap");
        } else {
            fail_validation("poker.community_cards: expected a count or a mapping");
        }
    }

    const Json distribution = section.value("card_distribution_inputs", Json::object());
    if (auto it = distribution.find("overall_cards"); it != distribution.end() && !it->is_null()) {
        const int overall = it->get<int>();
        if (overall < 0) fail_validation("poker.card_distribution_inputs.overall_cards: must be >= 0");
        community.n_cards = plans.empty() ? overall : std::min(overall, 5);
        community.card_names.clear();
        for (auto& p : plans) {
            p.hand.n_cards = 0;
            p.hand.card_names.clear();
        }
        for (int k = 0; k < overall - community.n_cards; ++k) ++plans[static_cast<std::size_t>(k) % plans.size()].hand.n_cards;
        for (auto& p : plans) p.hand.n_verso = std::min(p.hand.n_verso, p.hand.n_cards);
        community.n_verso = std::min(community.n_verso, community.n_cards);
    }

    std::optional<OverlapSpec> overlap;
    int overlap_cards = 0;
    int overlap_verso = 0;
    std::optional<Vec3> overlap_start;
    if (auto it = section.find("overlap"); it != section.end() && !it->is_null()) {
        const Json& oj = *it;
        OverlapSpec o;
        if (oj.is_number()) {
            o.overlap_fraction = oj.get<double>();
        } else if (oj.is_object()) {
            const std::string axis = get_or<std::string>(oj, "axis", "horizontal", "poker.overlap");
            if (axis == "horizontal") o.axis = OverlapAxis::horizontal;
            else if (axis == "vertical") o.axis = OverlapAxis::vertical;
            else fail_validation("poker.overlap.axis: expected horizontal or vertical");
            o.overlap_fraction = get_or<double>(oj, "overlap_fraction", 0.0, "poker.overlap");
            overlap_cards = get_or<int>(oj, "n_cards", community.n_cards, "poker.overlap");
            overlap_verso = get_or<int>(oj, "n_verso", 0, "poker.overlap");
            if (auto s = oj.find("start_location"); s != oj.end() && !s->is_null())
                overlap_start = vec3_from_json(*s, "poker.overlap.start_location");
        } else {
            fail_validation("poker.overlap: expected a fraction or a mapping");
        }
        if (!oj.is_object()) overlap_cards = community.n_cards;
        if (!(o.overlap_fraction >= 0.0 && o.overlap_fraction < 1.0))
            fail_validation("poker.overlap.overlap_fraction: must lie in [0, 1)");
        if (overlap_cards < 0 || overlap_verso < 0 || overlap_verso > overlap_cards)
            fail_validation("poker.overlap: invalid n_cards / n_verso");
        overlap = o;
    }

    for (std::size_t i = 0; i < plans.size(); ++i) check_hand(plans[i].hand, "poker.players[" + std::to_string(i) + "].hand_config");
    if (community.n_cards < 0 || community.n_verso < 0 || community.n_verso > community.n_cards)
        fail_validation("poker.community_cards: invalid n_cards / n_verso");
    if (!community.card_names.empty() && static_cast<int>(community.card_names.size()) != community.n_cards)
        fail_validation("poker.community_cards.card_names: length differs from n_cards");

    // Explicit names are reserved first; the rest is dealt from one shuffled deck.
    std::set<Card> reserved;
    auto reserve = [&](const std::vector<std::string>& names) {
        for (const auto& n : names)
            if (!reserved.insert(*parse_card(n)).second) fail_validation("poker: card " + n + " appears twice in the scene");
    };
    if (!overlap) reserve(community.card_names);
    for (const auto& p : plans) reserve(p.hand.card_names);
    int needed = overlap ? overlap_cards : (community.card_names.empty() ? community.n_cards : 0);
    for (const auto& p : plans) needed += p.hand.card_names.empty() ? p.hand.n_cards : 0;
    const std::vector<Card> dealt = deal_cards(needed, reserved, derive_seed(seed, 13));
    std::size_t cursor = 0;
    auto take = [&](int n, const std::vector<std::string>& names) {
        std::vector<Card> out;
        if (!names.empty()) {
            for (const auto& nm : names) out.push_back(*parse_card(nm));
            return out;
        }
        for (int k = 0; k < n; ++k) out.push_back(dealt[cursor++]);
        return out;
    };

    Rng jitter(derive_seed(seed, 14));
    if (overlap) {
        scene.overlap = OverlapRow{overlap->axis, overlap->overlap_fraction, {}};
        CommunitySpec row = community;
        row.n_verso = overlap_verso;
        if (overlap_start) {
            row.start_location = *overlap_start;
        } else {
            const Vec2 half = overlap_stride(*overlap, card_geometry(row.scale)) * (std::max(overlap_cards - 1, 0) / 2.0);
            row.start_location = {-half.x, -half.y, surface};
        }
        scene.overlap->cards = layout_cards(take(overlap_cards, {}), row, overlap);
    } else {
        scene.community = layout_cards(take(community.n_cards, community.card_names), community, std::nullopt, &jitter);
    }

    // Seats: evenly spaced on an ellipse inset from the table edge.
    const int n = static_cast<int>(plans.size());
    const Json chip_defaults = section.value("chip_distribution_inputs", Json::object());
    const bool chips_enabled = get_or<bool>(section, "chips", true, "poker");
    Rng chip_rng(derive_seed(seed, 15));
    for (int i = 0; i < n; ++i) {
        PlayerPlan& plan = plans[static_cast<std::size_t>(i)];
        const double theta = kPi / 2.0 + 2.0 * kPi * i / n;
        const Vec3 seat{0.7 * table.length / 2.0 * std::cos(theta), 0.7 * table.width / 2.0 * std::sin(theta), surface};
        const std::vector<Card> cards = take(plan.hand.n_cards, plan.hand.card_names);
        HandSpec hand = plan.hand;
        if (!plan.explicit_location) {
            const CardGeometry g = card_geometry(hand.scale);
            const Vec2 stride{g.height * hand.spread_factor_v, g.width * (1.0 + hand.spread_factor_h)};
            const double k = cards.empty() ? 0.0 : (static_cast<double>(cards.size()) - 1.0) / 2.0;
            hand.location = {seat.x - stride.x * k, seat.y - stride.y * k, surface};
        }
        Player player;
        player.player_id = plan.player_id;
        player.hand = layout_cards(cards, hand);
        if (chips_enabled) {
            const Vec3 chip_center{seat.x * 0.6, seat.y * 0.6, surface};
            Rng own(plan.chip_config.is_object() && plan.chip_config.contains("random_seed")
                        ? plan.chip_config["random_seed"].get<std::uint64_t>()
                        : chip_rng.next_u64());
            player.chips = build_chips(plan.chip_config.is_object() ? plan.chip_config : Json::object(), chip_defaults,
                                       chip_center, own);
        }
        scene.players.push_back(std::move(player));
    }

    for (const auto& name : out_of_table(scene, table)) warn("poker layout: card " + name + " extends beyond the table");
    return scene;
}

Json to_json(const PlacedCard& c) {
    return Json{{"card", encode(c.card)},
                {"position", to_json(c.position)},
                {"rotation", c.rotation},
                {"face_up", c.face_up}};
}

Json to_json(const PokerScene& scene) {
    Json j = Json::object();
    j["card_size"] = Json::array({scene.card_size.width, scene.card_size.height});
    Json players = Json::array();
    for (const auto& p : scene.players) {
        Json chips = Json::array();
        for (const auto& c : p.chips)
            chips.push_back(Json{{"position", to_json(c.position)},
                                 {"n_chips", c.n_chips},
                                 {"color", to_json(c.color)},
                                 {"scale", c.scale}});
        players.push_back(Json{{"player_id", p.player_id}, {"hand", card_row_json(p.hand)}, {"chips", std::move(chips)}});
    }
    j["players"] = std::move(players);
    j["community"] = card_row_json(scene.community);
    if (scene.overlap)
        j["overlap"] = Json{{"axis", std::string(to_string(scene.overlap->axis))},
                            {"overlap_fraction", scene.overlap->overlap_fraction},
                            {"cards", card_row_json(scene.overlap->cards)}};
    if (scene.grid)
        j["grid"] = Json{{"rows", scene.grid->rows},
                         {"cols", scene.grid->cols},
                         {"size", scene.grid->size},
                         {"center", to_json(scene.grid->center)},
                         {"row", scene.grid->row},
                         {"col", scene.grid->col},
                         {"card", to_json(scene.grid->card)}};
    return j;
}

PokerScene poker_scene_from_json(const Json& j) {
    if (!j.is_object()) fail_validation("poker.layout: expected a mapping");
    PokerScene s;
    if (auto it = j.find("card_size"); it != j.end()) {
        if (!it->is_array() || it->size() != 2) fail_validation("poker.layout.card_size: expected [width, height]");
        s.card_size = {(*it)[0].get<double>(), (*it)[1].get<double>()};
    }
    if (auto it = j.find("players"); it != j.end() && it->is_array()) {
        for (std::size_t i = 0; i < it->size(); ++i) {
            const Json& pj = (*it)[i];
            const std::string where = "poker.layout.players[" + std::to_string(i) + "]";
            Player p;
            p.player_id = get_or<std::string>(pj, "player_id", "Player_" + std::to_string(i + 1), where);
            p.hand = row_from_json(pj.value("hand", Json()), where + ".hand");
            for (const auto& cj : pj.value("chips", Json::array())) {
                ChipPile c;
                c.position = vec3_from_json(cj.value("position", Json()), where + ".chips.position");
                c.n_chips = get_or<int>(cj, "n_chips", c.n_chips, where + ".chips");
                if (auto col = cj.find("color"); col != cj.end()) c.color = scene::parse_color(*col, where + ".chips.color");
                c.scale = get_or<double>(cj, "scale", c.scale, where + ".chips");
                p.chips.push_back(c);
            }
            s.players.push_back(std::move(p));
        }
    }
    s.community = row_from_json(j.value("community", Json()), "poker.layout.community");
    if (auto it = j.find("overlap"); it != j.end() && !it->is_null()) {
        OverlapRow o;
        o.axis = get_or<std::string>(*it, "axis", "horizontal", "poker.layout.overlap") == "vertical" ? OverlapAxis::vertical
                                                                                                 : OverlapAxis::horizontal;
        o.overlap_fraction = get_or<double>(*it, "overlap_fraction", 0.0, "poker.layout.overlap");
        o.cards = row_from_json(it->value("cards", Json()), "poker.layout.overlap.cards");
        s.overlap = std::move(o);
    }
    if (auto it = j.find("grid"); it != j.end() && !it->is_null()) {
        GridPlacement g;
        g.rows = get_or<int>(*it, "rows", 3, "poker.layout.grid");
        g.cols = get_or<int>(*it, "cols", 3, "poker.layout.grid");
        g.size = get_or<double>(*it, "size", 0.6, "poker.layout.grid");
        g.center = vec3_from_json(it->value("center", Json()), "poker.layout.grid.center");
        g.row = get_or<int>(*it, "row", 0, "poker.layout.grid");
        g.col = get_or<int>(*it, "col", 0, "poker.layout.grid");
        g.card = placed_from_json(it->value("card", Json()), "poker.layout.grid.card");
        s.grid = g;
    }
    std::set<Card> seen;
    for (const auto& c : all_cards(s))
        if (!seen.insert(c.card).second) fail_validation("poker.layout: card " + encode(c.card) + " appears twice");
    return s;
}

}  // namespace scenediag::poker
