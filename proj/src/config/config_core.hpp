#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/json_util.hpp"
#include "common/rng.hpp"

namespace scenediag::config {

enum class VariateType { fixed, varying_all, varying_random, varying_among_range };

std::string_view to_string(VariateType type);
/// Accepts the canonical names and the aliases `varying_all_range`
/// (-> varying_among_range) and `varying_among` (-> varying_random).
std::optional<VariateType> variate_type_from_string(std::string_view name);

enum class PieceSet { standard, old_school, stones_color };

std::string_view to_string(PieceSet set);
std::optional<PieceSet> piece_set_from_string(std::string_view name);

enum class Game { chess, poker };

std::string_view to_string(Game game);
std::optional<Game> game_from_string(std::string_view name);

struct VariableSpec {
    std::string path;
    VariateType variate_type = VariateType::fixed;
    /// fixed: the single value; varying_all / varying_random: non-empty list;
    /// varying_among_range: [min, max].
    Json levels;
    int n_images = 1;
    bool randomize = false;
    double randomize_percentage = 0.2;

    friend bool operator==(const VariableSpec&, const VariableSpec&) = default;
};

struct DatasetSpec {
    std::string name;
    std::string output_dir;
    std::optional<std::uint64_t> seed;
    PieceSet piece_set = PieceSet::standard;
    Game game = Game::chess;
    std::vector<VariableSpec> variables;
    int replicates = 1;
    /// Constant scene configuration the variable assignments are written into.
    Json base = Json::object();
    /// Optional question grid used when writing per-image QA files.
    Json questions = Json::object();

    friend bool operator==(const DatasetSpec&, const DatasetSpec&) = default;
};

struct ConfigCombination {
    std::size_t index = 0;
    /// Variable path -> value, in declaration order.
    Json assignments = Json::object();
    std::uint64_t derived_seed = 0;
};

struct ExpansionOptions {
    std::size_t max_scenes = 100000;
};

DatasetSpec parse_dataset_spec(std::string_view text);
DatasetSpec dataset_spec_from_json(const Json& document);
/// Canonical document; parse_dataset_spec(dump(to_json(s))) == s.
Json to_json(const DatasetSpec& spec);
/// Stable hex digest of the canonical document.
std::string spec_hash(const DatasetSpec& spec);

bool has_randomness(const DatasetSpec& spec);

/// Replication factor applied to every distinct assignment: the largest
/// n_images among varying_all variables, times the dataset replicates.
std::size_t replication_factor(const DatasetSpec& spec);

/// Concrete level list of one variable. Random kinds draw from a stream keyed
/// by (dataset seed, variable path).
std::vector<Json> variable_levels(const DatasetSpec& spec, const VariableSpec& var);

/// Analytic scene count; saturates at SIZE_MAX.
std::size_t combination_count(const DatasetSpec& spec);

std::vector<ConfigCombination> expand_variables(const DatasetSpec& spec,
                                                const ExpansionOptions& options = {});

/// Uniform draw from [base*(1-p), base*(1+p)]; p outside [0,1] is clamped with a warning.
double resolve_randomization(double base, double percentage, Rng& rng);

/// `<dataset>_<index:05d>`
std::string scene_basename(std::string_view dataset, std::size_t index);

/// Manifest preview: header with the total count plus every combination with
/// its derived seed and output filenames.
Json expansion_manifest(const DatasetSpec& spec, const std::vector<ConfigCombination>& combos);

/// Writes a combination's assignments into a copy of the base scene config.
/// Paths starting with a setup component (camera, table, lighting, ...) land
/// under `setup`; `noise.*`, `chess.*`, `poker.*` and `setup.*` are literal;
/// anything else is relative to the game section.
Json apply_assignments(const DatasetSpec& spec, const ConfigCombination& combo);

}  // namespace scenediag::config
