#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "common/geometry.hpp"
#include "common/json_util.hpp"
#include "common/rng.hpp"
#include "scene/scene_model.hpp"

namespace scenediag::poker {

struct Card {
    int rank = 2;  // 2..14, 11 = J, 12 = Q, 13 = K, 14 = A
    char suit = 'S';

    friend auto operator<=>(const Card&, const Card&) = default;
};

std::string encode(Card card);
std::optional<Card> parse_card(std::string_view text);
/// 52 cards, suits S H D C, ranks ascending within a suit.
const std::vector<Card>& full_deck();
std::string_view suit_name(char suit);  // "spades", ...
std::optional<char> suit_from_name(std::string_view name);

struct CardGeometry {
    double width = 0.063;
    double height = 0.088;

    friend bool operator==(const CardGeometry&, const CardGeometry&) = default;
};

/// 0.063 x 0.088 m at scale 0.1, proportional to scale.
CardGeometry card_geometry(double scale);

struct PlacedCard {
    Card card;
    Vec3 position;
    double rotation = 0.0;  // degrees about the vertical axis
    bool face_up = true;

    friend bool operator==(const PlacedCard&, const PlacedCard&) = default;
};

struct ChipPile {
    Vec3 position;
    int n_chips = 8;
    Rgba color{0.1, 0.2, 0.8, 1.0};
    double scale = 0.06;

    friend bool operator==(const ChipPile&, const ChipPile&) = default;
};

struct Player {
    std::string player_id;
    std::vector<PlacedCard> hand;
    std::vector<ChipPile> chips;

    friend bool operator==(const Player&, const Player&) = default;
};

enum class OverlapAxis { horizontal, vertical };

std::string_view to_string(OverlapAxis axis);

struct OverlapSpec {
    OverlapAxis axis = OverlapAxis::horizontal;
    double overlap_fraction = 0.0;
};

struct OverlapRow {
    OverlapAxis axis = OverlapAxis::horizontal;
    double overlap_fraction = 0.0;
    std::vector<PlacedCard> cards;

    friend bool operator==(const OverlapRow&, const OverlapRow&) = default;
};

/// One card on a drawn rows x cols grid, for localization tasks.
struct GridPlacement {
    int rows = 3;
    int cols = 3;
    double size = 0.6;
    Vec3 center{0.0, 0.0, 0.91};
    int row = 0;
    int col = 0;
    PlacedCard card;

    friend bool operator==(const GridPlacement&, const GridPlacement&) = default;
};

struct PokerScene {
    CardGeometry card_size;
    std::vector<Player> players;
    std::vector<PlacedCard> community;
    std::optional<OverlapRow> overlap;
    std::optional<GridPlacement> grid;

    friend bool operator==(const PokerScene&, const PokerScene&) = default;
};

struct CardGap {
    double base_gap_x = 0.15;
    double base_gap_y = 0.005;
    bool random_gap = false;
};

struct HandSpec {
    std::vector<std::string> card_names;
    int n_cards = 2;
    Vec3 location;
    double scale = 0.1;
    double spread_factor_h = 0.2;
    double spread_factor_v = 0.05;
    int n_verso = 0;
    std::optional<std::uint64_t> random_seed;
};

struct CommunitySpec {
    std::vector<std::string> card_names;
    int n_cards = 5;
    Vec3 start_location{-0.3, 0.0, 0.91};
    double scale = 0.1;
    int n_verso = 0;
    CardGap card_gap;
};

/// n distinct cards outside `exclude`, shuffled deterministically by `seed`.
std::vector<Card> deal_cards(int n, const std::set<Card>& exclude, std::uint64_t seed);

/// The k-th card sits at start + k * stride. Horizontal is world y (image
/// horizontal under the default camera), vertical is world x; a card's width
/// lies along y. A hand strides w(1+h) horizontally and h_card * v
/// vertically; with overlap the stride along the axis is the card extent
/// times (1 - fraction). The last n_verso cards are face down; z rises by a
/// small epsilon per card.
std::vector<PlacedCard> layout_cards(const std::vector<Card>& cards, const HandSpec& spec,
                                     const std::optional<OverlapSpec>& overlap = std::nullopt);
/// Community stride is (base_gap_x, base_gap_y) in world x, y; random_gap jitters each gap by
/// up to 20% using `jitter`.
std::vector<PlacedCard> layout_cards(const std::vector<Card>& cards, const CommunitySpec& spec,
                                     const std::optional<OverlapSpec>& overlap = std::nullopt, Rng* jitter = nullptr);

inline constexpr double kCardEpsilon = 1e-4;

std::size_t total_card_count(const PokerScene& scene);
/// Every card in the scene, in legend order: community, players, overlap row, grid.
std::vector<PlacedCard> all_cards(const PokerScene& scene);

/// Axis-aligned footprint extent (x span, y span) of a row of cards.
Vec2 layout_extent(const std::vector<PlacedCard>& cards, CardGeometry size);

/// Builds a concrete poker scene from a `poker` config section. A `layout`
/// member is a concrete scene and is taken as-is.
PokerScene resolve_poker(const Json& section, const scene::Table& table, std::uint64_t seed);

/// Cards whose footprint leaves the table surface.
std::vector<std::string> out_of_table(const PokerScene& scene, const scene::Table& table);

Json to_json(const PlacedCard& card);
Json to_json(const PokerScene& scene);
PokerScene poker_scene_from_json(const Json& layout);

}  // namespace scenediag::poker
