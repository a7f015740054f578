#include "chess/chess_domain.hpp"

#include <algorithm>
#include <cmath>

#include "common/errors.hpp"
#include "common/rng.hpp"

namespace scenediag::chess {

namespace {

constexpr std::array<std::string_view, 6> kTypeNames{"pawn", "rook", "knight", "bishop", "queen", "king"};

Cell cell_from_json(const Json& j, std::string_view path) {
    if (j.is_object() && j.contains("row") && j.contains("col")) {
        const Json& r = j["row"];
        const Json& c = j["col"];
        if (!r.is_number_integer() || !c.is_number_integer())
            fail_validation(std::string(path) + ": row and col must be integers");
        return Cell{r.get<int>(), c.get<int>()};
    }
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        fail_validation(std::string(path) + ": expected a [row, col] pair");
    return {j[0].get<int>(), j[1].get<int>()};
}

std::optional<Spread> spread_from_string(std::string_view s) {
    if (s == "low") return Spread::low;
    if (s == "medium") return Spread::medium;
    if (s == "high") return Spread::high;
    return std::nullopt;
}

bool is_level_name(std::string_view s) { return s == "low" || s == "medium" || s == "high"; }

void shuffle_prefix(std::vector<Cell>& cells, std::size_t n, Rng& rng) {
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(cells.size() - i));
        std::swap(cells[i], cells[j]);
    }
}

}  // namespace

std::string_view to_string(PieceType type) { return kTypeNames[static_cast<std::size_t>(type)]; }

std::optional<PieceType> piece_type_from_string(std::string_view name) {
    std::string n;
    for (char c : name) n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    for (std::size_t i = 0; i < kTypeNames.size(); ++i)
        if (kTypeNames[i] == n) return kAllPieceTypes[i];
    return std::nullopt;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

BoardSpec parse_board_spec(const Json& j) {
    BoardSpec b;
    if (j.is_null()) return b;
    if (!j.is_object()) fail_validation("chess.board: expected a mapping");
    b.length = get_or<double>(j, "length", b.length, "chess.board");
    b.width = get_or<double>(j, "width", b.width, "chess.board");
    b.thickness = get_or<double>(j, "thickness", b.thickness, "chess.board");
    b.border_width = get_or<double>(j, "border_width", b.border_width, "chess.board");
    if (auto it = j.find("location"); it != j.end() && !it->is_null()) b.location = vec3_from_json(*it, "chess.board.location");
    b.rows = get_or<int>(j, "rows", b.rows, "chess.board");
    b.columns = get_or<int>(j, "columns", b.columns, "chess.board");
    b.random_pattern = get_or<bool>(j, "random_pattern", false, "chess.board");
    if (auto it = j.find("pattern_seed"); it != j.end() && !it->is_null()) b.pattern_seed = it->get<std::uint64_t>();
    if (auto it = j.find("board_material"); it != j.end())
        b.board_material = scene::parse_material(*it, b.board_material, "chess.board.board_material");
    if (auto it = j.find("white_material"); it != j.end())
        b.white_material = scene::parse_material(*it, b.white_material, "chess.board.white_material");
    if (auto it = j.find("black_material"); it != j.end())
        b.black_material = scene::parse_material(*it, b.black_material, "chess.board.black_material");
    if (!is_power_of_two(b.rows)) fail_validation("chess.board.rows: must be a power of 2, got " + std::to_string(b.rows));
    if (!is_power_of_two(b.columns))
        fail_validation("chess.board.columns: must be a power of 2, got " + std::to_string(b.columns));
    return b;
}

PieceCountSpec parse_count_spec(const Json& j) {
    PieceCountSpec c;
    if (j.is_null()) return c;
    if (j.is_number_integer()) {
        c.kind = CountKind::explicit_count;
        c.count = j.get<int>();
    } else if (j.is_string()) {
        c.kind = CountKind::preset;
        c.preset = j.get<std::string>();
    } else if (j.is_object()) {
        const std::string kind = get_or<std::string>(j, "spec_type", j.contains("count") ? "explicit" : "preset",
                                                     "chess.count_config");
        if (kind == "preset") c.kind = CountKind::preset;
        else if (kind == "explicit") c.kind = CountKind::explicit_count;
        else if (kind == "range") c.kind = CountKind::range;
        else fail_validation("chess.count_config.spec_type: unknown kind '" + kind + "' (valid: preset, explicit, range)");
        c.preset = get_or<std::string>(j, "preset", c.preset, "chess.count_config");
        c.count = get_or<int>(j, "count", c.count, "chess.count_config");
        c.min_count = get_or<int>(j, "min_count", c.min_count, "chess.count_config");
        c.max_count = get_or<int>(j, "max_count", c.max_count, "chess.count_config");
    } else {
        fail_validation("chess.count_config: expected a count, a preset or a mapping");
    }
    if (c.kind == CountKind::preset && !is_level_name(c.preset))
        fail_validation("chess.count_config.preset: unknown preset '" + c.preset + "' (valid: low, medium, high)");
    if (c.count < 0) fail_validation("chess.count_config.count: must be >= 0");
    if (c.min_count < 0 || c.min_count > c.max_count)
        fail_validation("chess.count_config: min_count must lie in [0, max_count]");
    return c;
}

PieceTypeSpec parse_type_spec(const Json& j) {
    PieceTypeSpec t;
    if (j.is_null()) return t;
    auto parse_list = [](const Json& list) {
        std::vector<PieceType> out;
        for (const auto& e : list) {
            auto pt = e.is_string() ? piece_type_from_string(e.get<std::string>()) : std::nullopt;
            if (!pt) fail_validation("chess.type_config.types: unknown piece type " + e.dump());
            out.push_back(*pt);
        }
        if (out.empty()) fail_validation("chess.type_config.types: empty list");
        return out;
    };
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (auto pt = piece_type_from_string(s)) {
            t.kind = TypeKind::explicit_list;
            t.types = {*pt};
        } else if (is_level_name(s)) {
            t.kind = TypeKind::preset;
            t.preset = s;
        } else {
            fail_validation("chess.type_config: '" + s + "' is neither a piece type nor a preset");
        }
    } else if (j.is_array()) {
        t.kind = TypeKind::explicit_list;
        t.types = parse_list(j);
    } else if (j.is_number_integer()) {
        t.kind = TypeKind::n_random;
        t.n_types = j.get<int>();
    } else if (j.is_object()) {
        const std::string kind = get_or<std::string>(j, "spec_type", j.contains("types") ? "explicit_list" : "preset",
                                                     "chess.type_config");
        if (kind == "preset") t.kind = TypeKind::preset;
        else if (kind == "explicit_list" || kind == "explicit") t.kind = TypeKind::explicit_list;
        else if (kind == "n_random") t.kind = TypeKind::n_random;
        else fail_validation("chess.type_config.spec_type: unknown kind '" + kind + "'");
        t.preset = get_or<std::string>(j, "preset", t.preset, "chess.type_config");
        t.n_types = get_or<int>(j, "n_types", t.n_types, "chess.type_config");
        if (t.kind == TypeKind::explicit_list) t.types = parse_list(j.value("types", Json::array()));
    } else {
        fail_validation("chess.type_config: expected a piece type, a list, a preset or a mapping");
    }
    if (t.kind == TypeKind::preset && !is_level_name(t.preset))
        fail_validation("chess.type_config.preset: unknown preset '" + t.preset + "'");
    if (t.n_types < 1 || t.n_types > 6) fail_validation("chess.type_config.n_types: must lie in [1, 6]");
    return t;
}

PiecePositionSpec parse_position_spec(const Json& j) {
    PiecePositionSpec p;
    if (j.is_null()) return p;
    if (j.is_string()) {
        auto s = spread_from_string(j.get<std::string>());
        if (!s) fail_validation("chess.position_config: unknown spread level '" + j.get<std::string>() + "'");
        p.spread = *s;
        return p;
    }
    if (!j.is_object()) fail_validation("chess.position_config: expected a mapping");
    if (auto it = j.find("spread_level"); it != j.end() && !it->is_null()) {
        auto s = it->is_string() ? spread_from_string(it->get<std::string>()) : std::nullopt;
        if (!s) fail_validation("chess.position_config.spread_level: expected low, medium or high");
        p.spread = *s;
    }
    if (auto it = j.find("start_point"); it != j.end() && !it->is_null()) {
        if (it->is_array()) {
            p.start = StartPoint::explicit_cell;
            p.start_cell = cell_from_json(*it, "chess.position_config.start_point");
        } else {
            const std::string s = it->is_string() ? it->get<std::string>() : "";
            if (s == "center") p.start = StartPoint::center;
            else if (s == "corner") p.start = StartPoint::corner;
            else if (s == "edge") p.start = StartPoint::edge;
            else fail_validation("chess.position_config.start_point: expected center, corner, edge or [row, col]");
        }
    }
    if (auto it = j.find("allowed_positions"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) fail_validation("chess.position_config.allowed_positions: expected a list of cells");
        for (const auto& c : *it) p.allowed_positions.push_back(cell_from_json(c, "chess.position_config.allowed_positions"));
        auto sorted = p.allowed_positions;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            fail_validation("chess.position_config.allowed_positions: duplicate cells");
    }
    return p;
}

PieceColorSpec parse_color_spec(const Json& j) {
    PieceColorSpec c;
    if (j.is_null()) return c;
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "random" || s == "mixed") return c;
        if (s == "white") c.palette = {kWhitePiece};
        else if (s == "black") c.palette = {kBlackPiece};
        else c.palette = {scene::parse_color(j, "chess.color_config")};
        return c;
    }
    if (j.is_array() && !j.empty() && (j[0].is_array() || j[0].is_string())) {
        for (const auto& e : j) {
            if (e.is_string() && e.get<std::string>() == "white") c.palette.push_back(kWhitePiece);
            else if (e.is_string() && e.get<std::string>() == "black") c.palette.push_back(kBlackPiece);
            else c.palette.push_back(scene::parse_color(e, "chess.color_config"));
        }
        return c;
    }
    c.palette = {scene::parse_color(j, "chess.color_config")};
    return c;
}

BoardLayout generate_board(const BoardSpec& spec, std::uint64_t seed) {
    if (!is_power_of_two(spec.rows) || !is_power_of_two(spec.columns))
        fail_validation("chess.board: rows and columns must be powers of 2");
    BoardLayout b;
    b.spec = spec;
    b.row_pitch = (spec.length - 2.0 * spec.border_width) / spec.rows;
    b.col_pitch = (spec.width - 2.0 * spec.border_width) / spec.columns;
    const double x0 = spec.location.x - (spec.length - 2.0 * spec.border_width) / 2.0;
    const double y0 = spec.location.y - (spec.width - 2.0 * spec.border_width) / 2.0;
    const double z = spec.location.z + spec.thickness;
    Rng rng(spec.pattern_seed.value_or(seed));
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.columns; ++c) {
            b.centers.push_back({x0 + (r + 0.5) * b.row_pitch, y0 + (c + 0.5) * b.col_pitch, z});
            b.dark.push_back(spec.random_pattern ? rng.chance(0.5) : ((r + c) % 2 == 1));
        }
    }
    return b;
}

Vec3 cell_to_world(const BoardLayout& board, int row, int col) {
    if (!board.in_bounds({row, col}))
        fail_validation("cell (" + std::to_string(row) + ", " + std::to_string(col) + ") is outside the " +
                        std::to_string(board.rows()) + "x" + std::to_string(board.columns()) + " board");
    return board.centers[static_cast<std::size_t>(row * board.columns() + col)];
}

std::optional<Cell> world_to_cell(const BoardLayout& board, Vec3 p) {
    const auto& s = board.spec;
    const double x0 = s.location.x - (s.length - 2.0 * s.border_width) / 2.0;
    const double y0 = s.location.y - (s.width - 2.0 * s.border_width) / 2.0;
    const int r = static_cast<int>(std::floor((p.x - x0) / board.row_pitch));
    const int c = static_cast<int>(std::floor((p.y - y0) / board.col_pitch));
    if (!board.in_bounds({r, c})) return std::nullopt;
    return Cell{r, c};
}

int preset_count(std::string_view preset, int min_count, int max_count) {
    int n = 10;
    if (preset == "low") n = 3;
    else if (preset == "high") n = 16;
    return std::clamp(n, min_count, max_count);
}

int types_for_preset(std::string_view preset) {
    if (preset == "low") return 1;
    if (preset == "high") return 6;
    return 3;
}

Cell start_cell(const PiecePositionSpec& spec, int rows, int columns) {
    switch (spec.start) {
        case StartPoint::center: return {(rows - 1) / 2, (columns - 1) / 2};
        case StartPoint::corner: return {0, 0};
        case StartPoint::edge: return {0, (columns - 1) / 2};
        case StartPoint::explicit_cell: return spec.start_cell;
    }
    return {0, 0};
}

int spread_radius(Spread spread, int rows, int columns) {
    switch (spread) {
        case Spread::low: return 1;
        case Spread::medium: return 3;
        case Spread::high: return std::max(rows, columns);
    }
    return 3;
}

std::vector<PieceSpec> generate_pieces(const PieceCountSpec& count, const PieceTypeSpec& types,
                                       const PiecePositionSpec& positions, const PieceColorSpec& colors,
                                       const PieceStyle& style, const BoardLayout& board, std::uint64_t seed) {
    Rng rng(seed);

    int n = 0;
    switch (count.kind) {
        case CountKind::preset: n = preset_count(count.preset, count.min_count, count.max_count); break;
        case CountKind::explicit_count: n = count.count; break;
        case CountKind::range: n = static_cast<int>(rng.between(count.min_count, count.max_count)); break;
    }

    std::vector<Cell> candidates;
    if (!positions.allowed_positions.empty()) {
        for (const auto& c : positions.allowed_positions) {
            if (!board.in_bounds(c))
                fail_validation("chess.position_config.allowed_positions: cell (" + std::to_string(c.row) + ", " +
                                std::to_string(c.col) + ") is outside the board");
            candidates.push_back(c);
        }
    } else {
        for (int r = 0; r < board.rows(); ++r)
            for (int c = 0; c < board.columns(); ++c) candidates.push_back({r, c});
    }
    if (n > board.rows() * board.columns())
        fail_validation("chess.count_config: " + std::to_string(n) + " pieces do not fit on a " +
                        std::to_string(board.rows()) + "x" + std::to_string(board.columns()) + " board");
    if (static_cast<std::size_t>(n) > candidates.size())
        fail_validation("chess.position_config.allowed_positions: " + std::to_string(candidates.size()) +
                        " allowed cells for " + std::to_string(n) + " pieces");

    std::vector<PieceType> palette;
    switch (types.kind) {
        case TypeKind::explicit_list: palette = types.types; break;
        case TypeKind::preset:
        case TypeKind::n_random: {
            const int k = types.kind == TypeKind::preset ? types_for_preset(types.preset) : types.n_types;
            std::vector<PieceType> all(kAllPieceTypes.begin(), kAllPieceTypes.end());
            for (int i = 0; i < k; ++i) {
                const std::size_t j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng.below(all.size() - i));
                std::swap(all[static_cast<std::size_t>(i)], all[j]);
            }
            palette.assign(all.begin(), all.begin() + k);
            break;
        }
    }

    const Cell start = start_cell(positions, board.rows(), board.columns());
    int radius = spread_radius(positions.spread, board.rows(), board.columns());
    std::vector<Cell> pool;
    for (;;) {
        pool.clear();
        for (const auto& c : candidates)
            if (std::max(std::abs(c.row - start.row), std::abs(c.col - start.col)) <= radius) pool.push_back(c);
        if (pool.size() >= static_cast<std::size_t>(n) || pool.size() == candidates.size()) break;
        ++radius;
    }
    shuffle_prefix(pool, static_cast<std::size_t>(n), rng);

    std::vector<PieceSpec> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        PieceSpec p;
        p.cell = pool[static_cast<std::size_t>(i)];
        p.world_location = cell_to_world(board, p.cell.row, p.cell.col);
        p.type = palette[rng.below(palette.size())];
        if (colors.palette.empty()) p.material.color = rng.chance(0.5) ? kWhitePiece : kBlackPiece;
        else p.material.color = colors.palette[rng.below(colors.palette.size())];
        p.material.roughness = style.roughness;
        p.scale = style.scale;
        if (style.random_rotation) p.rotation = rng.uniform(-style.max_rotation_angle, style.max_rotation_angle);
        out.push_back(p);
    }
    return out;
}

ChessScene resolve_chess(const Json& section_in, std::uint64_t seed) {
    const Json section = section_in.is_null() ? Json::object() : section_in;
    if (!section.is_object()) fail_validation("chess: expected a mapping");
    ChessScene scene;
    scene.board = parse_board_spec(section.value("board", Json()));
    if (scene.board.random_pattern && !scene.board.pattern_seed) scene.board.pattern_seed = derive_seed(seed, 1);
    const BoardLayout layout = generate_board(scene.board, seed);

    PieceStyle style;
    style.scale = get_or<double>(section, "piece_scale", style.scale, "chess");
    style.random_rotation = get_or<bool>(section, "random_rotation", false, "chess");
    style.max_rotation_angle = get_or<double>(section, "max_rotation_angle", style.max_rotation_angle, "chess");
    if (!(style.scale > 0)) fail_validation("chess.piece_scale: must be positive");

    if (auto it = section.find("pieces"); it != section.end() && !it->is_null()) {
        if (!it->is_array()) fail_validation("chess.pieces: expected a list");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const Json& pj = (*it)[i];
            const std::string where = "chess.pieces[" + std::to_string(i) + "]";
            if (!pj.is_object()) fail_validation(where + ": expected a mapping");
            PieceSpec p;
            const std::string type_name = get_or<std::string>(pj, "type", "", where);
            auto pt = piece_type_from_string(type_name);
            if (!pt) fail_validation(where + ".type: unknown piece type '" + type_name + "'");
            p.type = *pt;
            if (!pj.contains("position")) fail_validation(where + ".position: missing");
            p.cell = cell_from_json(pj["position"], where + ".position");
            if (!layout.in_bounds(p.cell)) fail_validation(where + ".position: cell outside the board");
            p.world_location = cell_to_world(layout, p.cell.row, p.cell.col);
            p.material.roughness = style.roughness;
            if (auto c = pj.find("color"); c != pj.end()) p.material.color = scene::parse_color(*c, where + ".color");
            p.material.roughness = get_or<double>(pj, "roughness", p.material.roughness, where);
            p.material.material_name = get_or<std::string>(pj, "material_name", "", where);
            p.scale = get_or<double>(pj, "scale", style.scale, where);
            p.rotation = get_or<double>(pj, "rotation", 0.0, where);
            scene.pieces.push_back(p);
        }
        return scene;
    }

    scene.pieces = generate_pieces(parse_count_spec(section.value("count_config", Json())),
                                   parse_type_spec(section.value("type_config", Json())),
                                   parse_position_spec(section.value("position_config", Json())),
                                   parse_color_spec(section.value("color_config", Json())), style, layout,
                                   derive_seed(seed, 2));
    return scene;
}

std::string_view color_label(const Rgba& color) { return color.luminance() >= 0.5 ? "white" : "black"; }

Json to_json(const BoardSpec& b) {
    Json j{{"length", b.length},
           {"width", b.width},
           {"thickness", b.thickness},
           {"border_width", b.border_width},
           {"location", to_json(b.location)},
           {"rows", b.rows},
           {"columns", b.columns},
           {"random_pattern", b.random_pattern}};
    if (b.pattern_seed) j["pattern_seed"] = *b.pattern_seed;
    j["board_material"] = scene::to_json(b.board_material);
    j["white_material"] = scene::to_json(b.white_material);
    j["black_material"] = scene::to_json(b.black_material);
    return j;
}

Json to_json(const PieceSpec& p) {
    Json j{{"type", std::string(to_string(p.type))},
           {"position", Json::array({p.cell.row, p.cell.col})},
           {"color", to_json(p.material.color)},
           {"roughness", p.material.roughness}};
    if (!p.material.material_name.empty()) j["material_name"] = p.material.material_name;
    j["scale"] = p.scale;
    j["rotation"] = p.rotation;
    j["world_location"] = to_json(p.world_location);
    return j;
}

Json to_json(const ChessScene& scene) {
    Json pieces = Json::array();
    for (const auto& p : scene.pieces) pieces.push_back(to_json(p));
    return Json{{"board", to_json(scene.board)}, {"pieces", std::move(pieces)}};
}

}  // namespace scenediag::chess
