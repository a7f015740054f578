#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chess/chess_domain.hpp"
#include "common/json_util.hpp"
#include "config/config_core.hpp"
#include "poker/poker_domain.hpp"
#include "scene/scene_model.hpp"

namespace scenediag::scene {

/// A scene with every preset replaced by numbers and every object placed.
struct ResolvedScene {
    Setup setup;
    Noise noise;
    config::Game game = config::Game::chess;
    chess::ChessScene chess;
    poker::PokerScene poker;
    std::uint64_t seed = 0;
    config::PieceSet piece_set = config::PieceSet::standard;
    std::string backend = "raster";

    friend bool operator==(const ResolvedScene&, const ResolvedScene&) = default;
};

/// Accepts the sectioned layout (`setup`, `noise`, `chess` / `poker` or
/// `game`) and the flat layout with `board`, `pieces`, `camera`, `lighting`
/// at the root. Exported scene specs resolve to the scene they came from.
ResolvedScene resolve_presets(const Json& raw, std::uint64_t seed,
                              config::PieceSet piece_set = config::PieceSet::standard);

/// Ordered list of violations, each prefixed by the offending path. Empty
/// means valid.
std::vector<std::string> validate_scene(const ResolvedScene& scene);

/// Scene-spec document with `setup`, `noise` and `game` sections.
Json export_scene_spec(const ResolvedScene& scene);
ResolvedScene import_scene_spec(const Json& spec);

}  // namespace scenediag::scene
