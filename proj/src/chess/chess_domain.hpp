#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/geometry.hpp"
#include "common/json_util.hpp"
#include "scene/scene_model.hpp"

namespace scenediag::chess {

enum class PieceType { pawn, rook, knight, bishop, queen, king };

inline constexpr std::array<PieceType, 6> kAllPieceTypes{PieceType::pawn,   PieceType::rook,  PieceType::knight,
                                                         PieceType::bishop, PieceType::queen, PieceType::king};

std::string_view to_string(PieceType type);
std::optional<PieceType> piece_type_from_string(std::string_view name);

struct Cell {
    int row = 0;
    int col = 0;

    friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct BoardSpec {
    double length = 0.7;  // along rows (x)
    double width = 0.7;   // along columns (y)
    double thickness = 0.05;
    double border_width = 0.05;
    Vec3 location{0.0, 0.0, 0.9};
    int rows = 8;
    int columns = 8;
    bool random_pattern = false;
    std::optional<std::uint64_t> pattern_seed;
    scene::Material board_material{{0.4, 0.3, 0.2, 1.0}, 0.5, ""};
    scene::Material white_material{{0.9, 0.9, 0.9, 1.0}, 0.3, ""};
    scene::Material black_material{{0.1, 0.1, 0.1, 1.0}, 0.3, ""};

    friend bool operator==(const BoardSpec&, const BoardSpec&) = default;
};

struct BoardLayout {
    BoardSpec spec;
    double row_pitch = 0;
    double col_pitch = 0;
    /// Row-major cell centers on the board's top surface.
    std::vector<Vec3> centers;
    /// Row-major; true for dark squares.
    std::vector<bool> dark;

    int rows() const { return spec.rows; }
    int columns() const { return spec.columns; }
    bool in_bounds(Cell c) const { return c.row >= 0 && c.row < spec.rows && c.col >= 0 && c.col < spec.columns; }
    bool is_dark(Cell c) const { return dark[static_cast<std::size_t>(c.row * spec.columns + c.col)]; }
};

struct PieceSpec {
    PieceType type = PieceType::pawn;
    Cell cell;
    Vec3 world_location;
    scene::Material material{{0.9, 0.9, 0.9, 1.0}, 0.3, ""};
    double scale = 0.1;
    double rotation = 0.0;  // degrees about the vertical axis

    friend bool operator==(const PieceSpec&, const PieceSpec&) = default;
};

enum class CountKind { preset, explicit_count, range };
enum class TypeKind { preset, explicit_list, n_random };
enum class Spread { low, medium, high };
enum class StartPoint { center, corner, edge, explicit_cell };

struct PieceCountSpec {
    CountKind kind = CountKind::preset;
    std::string preset = "medium";
    int count = 10;
    int min_count = 5;
    int max_count = 15;
};

struct PieceTypeSpec {
    TypeKind kind = TypeKind::preset;
    std::string preset = "medium";
    std::vector<PieceType> types;
    int n_types = 3;
};

struct PiecePositionSpec {
    std::vector<Cell> allowed_positions;
    Spread spread = Spread::medium;
    StartPoint start = StartPoint::center;
    Cell start_cell;
};

struct PieceColorSpec {
    /// Empty means white/black drawn per piece.
    std::vector<Rgba> palette;
};

struct PieceStyle {
    double scale = 0.1;
    bool random_rotation = false;
    double max_rotation_angle = 15.0;
    double roughness = 0.3;
};

inline constexpr Rgba kWhitePiece{0.9, 0.9, 0.9, 1.0};
inline constexpr Rgba kBlackPiece{0.1, 0.1, 0.1, 1.0};

struct ChessScene {
    BoardSpec board;
    std::vector<PieceSpec> pieces;

    friend bool operator==(const ChessScene&, const ChessScene&) = default;
};

bool is_power_of_two(int n);

BoardSpec parse_board_spec(const Json& j);
PieceCountSpec parse_count_spec(const Json& j);
PieceTypeSpec parse_type_spec(const Json& j);
PiecePositionSpec parse_position_spec(const Json& j);
PieceColorSpec parse_color_spec(const Json& j);

BoardLayout generate_board(const BoardSpec& spec, std::uint64_t seed);
Vec3 cell_to_world(const BoardLayout& board, int row, int col);
std::optional<Cell> world_to_cell(const BoardLayout& board, Vec3 p);

/// Count presets low 3 / medium 10 / high 16, clamped into [min_count, max_count].
int preset_count(std::string_view preset, int min_count, int max_count);
int types_for_preset(std::string_view preset);
Cell start_cell(const PiecePositionSpec& spec, int rows, int columns);
int spread_radius(Spread spread, int rows, int columns);

std::vector<PieceSpec> generate_pieces(const PieceCountSpec& count, const PieceTypeSpec& types,
                                       const PiecePositionSpec& positions, const PieceColorSpec& colors,
                                       const PieceStyle& style, const BoardLayout& board, std::uint64_t seed);

/// Builds a concrete chess scene from a `chess` config section. An explicit
/// `pieces` list is taken as-is; otherwise pieces come from the count, type,
/// position and color configs.
ChessScene resolve_chess(const Json& section, std::uint64_t seed);

/// "white" when the color is light, "black" otherwise.
std::string_view color_label(const Rgba& color);

Json to_json(const BoardSpec& board);
Json to_json(const PieceSpec& piece);
Json to_json(const ChessScene& scene);

}  // namespace scenediag::chess
