#pragma once

#include <cstdint>

#include "common/json_util.hpp"
#include "common/rng.hpp"

namespace scenediag::testing {

/// Dataset spec document with 0..4 variables of random kinds, small enough to expand.
Json fuzz_dataset_document(Rng& rng);

/// Chess scene config: random board size, count, type, position and color specs.
Json fuzz_chess_config(Rng& rng);

/// Poker scene config: players, community cards, face-down cards, and now and
/// then an overlap row or a single-card grid.
Json fuzz_poker_config(Rng& rng);

}  // namespace scenediag::testing
