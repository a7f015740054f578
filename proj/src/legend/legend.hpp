#pragma once

#include <optional>
#include <string>
#include <vector>

#include "common/geometry.hpp"
#include "common/json_util.hpp"
#include "scene/resolved_scene.hpp"

namespace scenediag::legend {

struct BoardRecord {
    int rows = 8;
    int columns = 8;
    double length = 0.7;
    double width = 0.7;
    Vec3 location;

    friend bool operator==(const BoardRecord&, const BoardRecord&) = default;
};

struct PieceRecord {
    std::string type;
    int row = 0;
    int col = 0;
    Rgba color;
    double scale = 0.1;
    Vec3 world_location;

    friend bool operator==(const PieceRecord&, const PieceRecord&) = default;
};

struct TableRecord {
    std::string shape = "rectangular";
    double length = 2.0;
    double width = 1.0;
    double height = 0.9;

    friend bool operator==(const TableRecord&, const TableRecord&) = default;
};

struct CardRecord {
    std::string card;
    Vec3 position;
    bool face_up = true;

    friend bool operator==(const CardRecord&, const CardRecord&) = default;
};

struct ChipRecord {
    Vec3 position;
    int n_chips = 0;
    Rgba color;

    friend bool operator==(const ChipRecord&, const ChipRecord&) = default;
};

struct PlayerRecord {
    std::string player_id;
    std::vector<CardRecord> hand;
    std::vector<ChipRecord> chips;

    friend bool operator==(const PlayerRecord&, const PlayerRecord&) = default;
};

struct OverlapRecord {
    std::string axis;
    double overlap_fraction = 0;
    std::vector<CardRecord> cards;

    friend bool operator==(const OverlapRecord&, const OverlapRecord&) = default;
};

struct GridRecord {
    int rows = 3;
    int cols = 3;
    int row = 0;
    int col = 0;
    CardRecord card;

    friend bool operator==(const GridRecord&, const GridRecord&) = default;
};

struct CameraRecord {
    double distance = 0;
    double angle = 0;
    double horizontal_angle = 0;
    double vfov = 50;

    friend bool operator==(const CameraRecord&, const CameraRecord&) = default;
};

struct NoiseRecord {
    std::string blur = "none";
    std::optional<double> f_stop;
    double lighting = 1.0;
    std::string table_texture = "medium";

    friend bool operator==(const NoiseRecord&, const NoiseRecord&) = default;
};

/// Ground truth for one image. JSON is the normative form; the text view is
/// derived from the same record.
struct Legend {
    std::string game = "chess";
    std::optional<BoardRecord> board;
    std::vector<PieceRecord> pieces;
    std::optional<TableRecord> table;
    std::vector<CardRecord> community;
    std::vector<PlayerRecord> players;
    std::optional<OverlapRecord> overlap;
    std::optional<GridRecord> grid;
    std::optional<CameraRecord> camera;
    std::optional<NoiseRecord> noise;
    std::optional<std::uint64_t> seed;

    friend bool operator==(const Legend&, const Legend&) = default;
};

Legend build_legend(const scene::ResolvedScene& scene);

Json render_legend_json(const Legend& legend);
Legend parse_legend_json(const Json& document);

std::string render_legend_text(const Legend& legend);

/// Every card record in legend order: community, player hands, overlap row, grid.
std::vector<CardRecord> all_cards(const Legend& legend);

}  // namespace scenediag::legend
