#include "scene/resolved_scene.hpp"

#include <cmath>

namespace scenediag::scene {

namespace {

constexpr std::string_view kSetupKeys[] = {"camera", "table", "lighting", "resolution", "render", "background", "floor"};

void check_color(std::vector<std::string>& out, const Rgba& c, const std::string& path) {
    if (!c.in_unit_range()) out.push_back(path + ": RGBA components must lie in [0, 1]");
}

void check_positive(std::vector<std::string>& out, double v, const std::string& path) {
    if (!(v > 0) || !std::isfinite(v)) out.push_back(path + ": must be positive");
}

bool point_on_table(const Table& t, double x, double y) {
    const double hx = t.length / 2.0, hy = t.width / 2.0;
    if (t.shape == TableShape::rectangular) return std::abs(x) <= hx + 1e-12 && std::abs(y) <= hy + 1e-12;
    return (x * x) / (hx * hx) + (y * y) / (hy * hy) <= 1.0 + 1e-12;
}

}  // namespace

ResolvedScene resolve_presets(const Json& raw_in, std::uint64_t seed, config::PieceSet piece_set) {
    const Json raw = raw_in.is_null() ? Json::object() : raw_in;
    if (!raw.is_object()) fail_validation("scene: expected a mapping");

    Json setup = raw.value("setup", Json::object());
    if (!setup.is_object()) fail_validation("setup: expected a mapping");
    for (auto key : kSetupKeys) {
        const std::string k(key);
        if (raw.contains(k) && !setup.contains(k)) setup[k] = raw[k];
    }
    Json noise = raw.value("noise", Json::object());

    Json chess_section = raw.value("chess", Json());
    Json poker_section = raw.value("poker", Json());
    std::optional<config::Game> game;
    if (auto it = raw.find("game"); it != raw.end() && !it->is_null()) {
        if (it->is_string()) {
            game = config::game_from_string(it->get<std::string>());
            if (!game) fail_validation("game: unknown game '" + it->get<std::string>() + "'");
        } else if (it->is_object()) {
            if (auto k = it->find("kind"); k != it->end()) {
                game = config::game_from_string(k->is_string() ? k->get<std::string>() : "");
                if (!game) fail_validation("game.kind: expected chess or poker");
            }
            if (it->contains("chess")) chess_section = (*it)["chess"];
            if (it->contains("poker")) poker_section = (*it)["poker"];
        } else {
            fail_validation("game: expected a name or a mapping");
        }
    }
    if (raw.contains("board") || raw.contains("pieces")) {
        if (chess_section.is_null()) chess_section = Json::object();
        if (raw.contains("board") && !chess_section.contains("board")) chess_section["board"] = raw["board"];
        if (raw.contains("pieces") && !chess_section.contains("pieces")) chess_section["pieces"] = raw["pieces"];
    }
    if (!game) game = !poker_section.is_null() && chess_section.is_null() ? config::Game::poker : config::Game::chess;

    ResolvedScene scene;
    scene.seed = seed;
    scene.piece_set = piece_set;
    scene.game = *game;
    if (auto it = raw.find("piece_set"); it != raw.end() && it->is_string()) {
        auto ps = config::piece_set_from_string(it->get<std::string>());
        if (!ps) fail_validation("piece_set: unknown piece set '" + it->get<std::string>() + "'");
        scene.piece_set = *ps;
    }
    scene.backend = get_or<std::string>(raw, "backend", "raster", "scene");

    Rng rng(derive_seed(seed, 3));
    Environment env = resolve_environment(setup, noise, rng);
    scene.setup = env.setup;
    scene.noise = env.noise;

    if (scene.game == config::Game::chess) {
        Json section = chess_section.is_null() ? Json::object() : chess_section;
        if (!section.is_object()) fail_validation("chess: expected a mapping");
        Json board = section.value("board", Json::object());
        if (board.is_object() && !board.contains("location"))
            board["location"] = Json::array({0.0, 0.0, scene.setup.table.height});
        section["board"] = board;
        scene.chess = chess::resolve_chess(section, seed);
    } else {
        scene.poker = poker::resolve_poker(poker_section, scene.setup.table, seed);
    }
    return scene;
}

std::vector<std::string> validate_scene(const ResolvedScene& s) {
    std::vector<std::string> out;
    const Setup& st = s.setup;
    if (st.resolution.pixel_width() < 16) out.push_back("resolution.width: must be at least 16 pixels");
    if (st.resolution.pixel_height() < 16) out.push_back("resolution.height: must be at least 16 pixels");
    check_positive(out, st.camera.distance, "camera.distance");
    if (!(st.camera.angle > 0 && st.camera.angle <= 90)) out.push_back("camera.angle: must lie in (0, 90]");
    check_positive(out, st.table.length, "table.length");
    check_positive(out, st.table.width, "table.width");
    check_positive(out, st.table.height, "table.height");
    check_color(out, st.table.material.color, "table.material.color");
    check_color(out, st.floor.color, "floor.color");
    check_color(out, st.background.color, "background.color");
    if (st.background.use_hdri) out.push_back("background.use_hdri: unsupported in primary backend");
    check_positive(out, st.lighting.multiplier, "lighting.lighting");
    if (!(s.noise.blur_fstop > 0)) out.push_back("noise.blur: f-stop must be positive");
    check_positive(out, s.noise.lighting_multiplier, "noise.lighting");

    if (s.game == config::Game::chess) {
        const chess::BoardSpec& b = s.chess.board;
        check_positive(out, b.length, "board.length");
        check_positive(out, b.width, "board.width");
        check_positive(out, b.thickness, "board.thickness");
        if (b.border_width < 0 || 2 * b.border_width >= std::min(b.length, b.width))
            out.push_back("board.border_width: must be >= 0 and leave room for the squares");
        check_color(out, b.board_material.color, "board.board_material.color");
        check_color(out, b.white_material.color, "board.white_material.color");
        check_color(out, b.black_material.color, "board.black_material.color");
        if (st.table.length > 0 && st.table.width > 0) {
            bool fits = true;
            for (double sx : {-0.5, 0.5})
                for (double sy : {-0.5, 0.5})
                    fits = fits && point_on_table(st.table, b.location.x + sx * b.length, b.location.y + sy * b.width);
            if (!fits) out.push_back("board: does not fit on the table");
        }
        for (std::size_t i = 0; i < s.chess.pieces.size(); ++i) {
            const auto& p = s.chess.pieces[i];
            const std::string where = "pieces[" + std::to_string(i) + "]";
            check_color(out, p.material.color, where + ".color");
            check_positive(out, p.scale, where + ".scale");
        }
    } else {
        for (const auto& pl : s.poker.players)
            for (std::size_t i = 0; i < pl.chips.size(); ++i)
                check_color(out, pl.chips[i].color, pl.player_id + ".chips[" + std::to_string(i) + "].color");
    }
    return out;
}

Json export_scene_spec(const ResolvedScene& s) {
    Json j = Json::object();
    j["setup"] = to_json(s.setup);
    j["noise"] = to_json(s.noise);
    Json game{{"kind", std::string(config::to_string(s.game))}};
    if (s.game == config::Game::chess) game["chess"] = chess::to_json(s.chess);
    else game["poker"] = Json{{"layout", poker::to_json(s.poker)}};
    j["game"] = std::move(game);
    j["seed"] = s.seed;
    j["piece_set"] = std::string(config::to_string(s.piece_set));
    j["backend"] = s.backend;
    return j;
}

ResolvedScene import_scene_spec(const Json& spec) {
    if (!spec.is_object()) fail_validation("scene spec: expected a mapping");
    return resolve_presets(spec, get_or<std::uint64_t>(spec, "seed", 0, "scene spec"));
}

}  // namespace scenediag::scene
