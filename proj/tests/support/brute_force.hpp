#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "config/config_core.hpp"
#include "qa/oracle.hpp"
#include "scene/resolved_scene.hpp"

namespace scenediag::testing {

/// Ground truth recomputed straight from the resolved scene, without the
/// legend. Empty when the question does not apply to the scene.
std::optional<qa::GroundTruth> brute_force_answer(const std::string& key, const scene::ResolvedScene& scene,
                                                  const std::map<std::string, std::string>& bindings);

/// One entry per generated scene: for each variable, the index of the level
/// (or draw) it takes, enumerated with plain nested loops.
std::vector<std::vector<std::size_t>> brute_force_expansion(const config::DatasetSpec& spec);

std::string card_code(int rank, char suit);

int grid_distance(int r1, int c1, int r2, int c2);

}  // namespace scenediag::testing
