#include "config/config_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "common/errors.hpp"
#include "common/log.hpp"

namespace scenediag::config {

namespace {

constexpr std::array<std::pair<std::string_view, VariateType>, 6> kVariateNames{{
    {"fixed", VariateType::fixed},
    {"varying_all", VariateType::varying_all},
    {"varying_random", VariateType::varying_random},
    {"varying_among_range", VariateType::varying_among_range},
    {"varying_all_range", VariateType::varying_among_range},
    {"varying_among", VariateType::varying_random},
}};

std::string var_path(const std::string& path) { return "variables." + path; }

bool is_integral(const Json& v) { return v.is_number_integer() || v.is_number_unsigned(); }

std::size_t saturating_mul(std::size_t a, std::size_t b) {
    if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a)
        return std::numeric_limits<std::size_t>::max();
    return a * b;
}

VariableSpec parse_variable(const std::string& path, const Json& def) {
    VariableSpec var;
    var.path = path;
    const std::string where = var_path(path);
    if (path.empty()) fail_validation("variables: empty variable path");
    if (!def.is_object()) fail_validation(where + ": expected a mapping");

    auto type_it = def.find("variate_type");
    if (type_it == def.end() || !type_it->is_string())
        fail_validation(where + ".variate_type: missing");
    auto type = variate_type_from_string(type_it->get<std::string>());
    if (!type) {
        fail_validation(where + ".variate_type: unknown variate type '" + type_it->get<std::string>() +
                        "' (valid: fixed, varying_all, varying_random, varying_among_range, "
                        "varying_all_range, varying_among)");
    }
    var.variate_type = *type;

    var.n_images = get_or<int>(def, "n_images", 1, where);
    if (var.n_images < 1) fail_validation(where + ".n_images: must be a positive integer");
    var.randomize = get_or<bool>(def, "randomize", false, where);
    var.randomize_percentage = get_or<double>(def, "randomize_percentage", 0.2, where);
    if (!(var.randomize_percentage >= 0.0 && var.randomize_percentage <= 1.0))
        fail_validation(where + ".randomize_percentage: must lie in [0, 1]");

    Json levels;
    if (auto it = def.find("variate_levels"); it != def.end()) {
        levels = *it;
    } else if (auto v = def.find("value"); v != def.end()) {
        levels = *v;
    } else {
        fail_validation(where + ".variate_levels: missing");
    }

    switch (var.variate_type) {
        case VariateType::fixed:
            // The long form `{type: fixed, value: X, ...}` carries the value inside.
            if (levels.is_object() && levels.contains("value")) levels = levels["value"];
            if (levels.is_array())
                fail_validation(where + ".variate_levels: fixed variables take a single value, got a list");
            if (levels.is_null()) fail_validation(where + ".variate_levels: fixed value is null");
            break;
        case VariateType::varying_all:
        case VariateType::varying_random:
            if (!levels.is_array() || levels.empty())
                fail_validation(where + ".variate_levels: expected a non-empty list of levels");
            break;
        case VariateType::varying_among_range:
            if (!levels.is_array() || levels.size() != 2 || !levels[0].is_number() ||
                !levels[1].is_number())
                fail_validation(where + ".variate_levels: expected a [min, max] numeric interval");
            if (levels[0].get<double>() > levels[1].get<double>())
                fail_validation(where + ".variate_levels: min exceeds max");
            break;
    }
    var.levels = std::move(levels);
    return var;
}

bool variable_is_random(const VariableSpec& var) {
    if (var.randomize) return true;
    if (var.variate_type == VariateType::varying_random) return true;
    if (var.variate_type == VariateType::varying_among_range)
        return !(is_integral(var.levels[0]) && is_integral(var.levels[1]));
    return false;
}

Json randomized_value(const Json& value, double percentage, Rng& rng) {
    if (!value.is_number()) return value;
    const double out = resolve_randomization(value.get<double>(), percentage, rng);
    if (is_integral(value)) return static_cast<std::int64_t>(std::llround(out));
    return out;
}

const std::array<std::string_view, 7> kSetupSections{"camera", "table",      "lighting", "resolution",
                                                     "render", "background", "floor"};

}  // namespace

std::string_view to_string(VariateType type) {
    switch (type) {
        case VariateType::fixed: return "fixed";
        case VariateType::varying_all: return "varying_all";
        case VariateType::varying_random: return "varying_random";
        case VariateType::varying_among_range: return "varying_among_range";
    }
    return "fixed";
}

std::optional<VariateType> variate_type_from_string(std::string_view name) {
    for (const auto& [n, t] : kVariateNames)
        if (n == name) return t;
    return std::nullopt;
}

std::string_view to_string(PieceSet set) {
    switch (set) {
        case PieceSet::standard: return "default";
        case PieceSet::old_school: return "old_school";
        case PieceSet::stones_color: return "stones_color";
    }
    return "default";
}

std::optional<PieceSet> piece_set_from_string(std::string_view name) {
    if (name == "default") return PieceSet::standard;
    if (name == "old_school") return PieceSet::old_school;
    if (name == "stones_color") return PieceSet::stones_color;
    return std::nullopt;
}

std::string_view to_string(Game game) { return game == Game::chess ? "chess" : "poker"; }

std::optional<Game> game_from_string(std::string_view name) {
    if (name == "chess") return Game::chess;
    if (name == "poker") return Game::poker;
    return std::nullopt;
}

DatasetSpec dataset_spec_from_json(const Json& doc) {
    if (!doc.is_object()) fail_validation("document: expected a mapping with `dataset` and `variables`");
    auto ds = doc.find("dataset");
    if (ds == doc.end() || !ds->is_object()) fail_validation("dataset: missing header section");

    DatasetSpec spec;
    spec.name = get_or<std::string>(*ds, "name", "", "dataset");
    if (spec.name.empty()) fail_validation("dataset.name: missing");
    for (char c : spec.name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
            fail_validation("dataset.name: '" + spec.name + "' is not an identifier");
    spec.output_dir = get_or<std::string>(*ds, "output_dir", spec.name, "dataset");
    if (auto it = ds->find("seed"); it != ds->end() && !it->is_null()) {
        if (!is_integral(*it) || (it->is_number_integer() && it->get<std::int64_t>() < 0))
            fail_validation("dataset.seed: expected an unsigned integer");
        spec.seed = it->get<std::uint64_t>();
    }
    const auto piece_set = get_or<std::string>(*ds, "piece_set", "default", "dataset");
    if (auto ps = piece_set_from_string(piece_set)) spec.piece_set = *ps;
    else fail_validation("dataset.piece_set: unknown piece set '" + piece_set + "'");
    spec.replicates = get_or<int>(*ds, "replicates", 1, "dataset");
    if (spec.replicates < 1) fail_validation("dataset.replicates: must be a positive integer");

    if (auto vars = doc.find("variables"); vars != doc.end() && !vars->is_null()) {
        if (!vars->is_object()) fail_validation("variables: expected a mapping of path -> definition");
        for (const auto& [path, def] : vars->items()) spec.variables.push_back(parse_variable(path, def));
    }

    // Game: explicit, else inferred from the variable paths or the base config.
    if (auto g = ds->find("game"); g != ds->end() && !g->is_null()) {
        auto game = g->is_string() ? game_from_string(g->get<std::string>()) : std::nullopt;
        if (!game) fail_validation("dataset.game: expected chess or poker");
        spec.game = *game;
    } else {
        bool poker_hint = false;
        for (const auto& v : spec.variables)
            if (v.path.rfind("poker.", 0) == 0 || v.path.rfind("card_", 0) == 0 ||
                v.path.rfind("chip_", 0) == 0 || v.path == "n_players")
                poker_hint = true;
        if (auto b = doc.find("base"); b != doc.end() && b->is_object() && b->contains("poker"))
            poker_hint = true;
        spec.game = poker_hint ? Game::poker : Game::chess;
    }

    if (auto b = doc.find("base"); b != doc.end() && !b->is_null()) {
        if (!b->is_object()) fail_validation("base: expected a mapping");
        spec.base = *b;
    }
    if (auto q = doc.find("questions"); q != doc.end() && !q->is_null()) {
        if (!q->is_object()) fail_validation("questions: expected a mapping");
        spec.questions = *q;
    }

    for (std::size_t i = 0; i < spec.variables.size(); ++i)
        for (std::size_t j = i + 1; j < spec.variables.size(); ++j)
            if (spec.variables[i].path == spec.variables[j].path)
                fail_validation(var_path(spec.variables[i].path) + ": duplicate variable path");

    if (!spec.seed && has_randomness(spec))
        fail_validation("dataset.seed: required because the spec contains random variates");
    return spec;
}

DatasetSpec parse_dataset_spec(std::string_view text) {
    return dataset_spec_from_json(parse_structured_text(text));
}

Json to_json(const DatasetSpec& spec) {
    Json ds = Json::object();
    ds["name"] = spec.name;
    ds["output_dir"] = spec.output_dir;
    if (spec.seed) ds["seed"] = *spec.seed;
    ds["piece_set"] = std::string(to_string(spec.piece_set));
    ds["game"] = std::string(to_string(spec.game));
    ds["replicates"] = spec.replicates;

    Json vars = Json::object();
    for (const auto& v : spec.variables) {
        Json def = Json::object();
        def["variate_type"] = std::string(to_string(v.variate_type));
        def["variate_levels"] =
            v.variate_type == VariateType::fixed ? Json{{"value", v.levels}} : v.levels;
        def["n_images"] = v.n_images;
        def["randomize"] = v.randomize;
        def["randomize_percentage"] = v.randomize_percentage;
        vars[v.path] = std::move(def);
    }
    Json doc = Json::object();
    doc["dataset"] = std::move(ds);
    doc["variables"] = std::move(vars);
    doc["base"] = spec.base;
    doc["questions"] = spec.questions;
    return doc;
}

std::string spec_hash(const DatasetSpec& spec) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(to_json(spec).dump())));
    return buf;
}

bool has_randomness(const DatasetSpec& spec) {
    return std::any_of(spec.variables.begin(), spec.variables.end(), variable_is_random);
}

std::size_t replication_factor(const DatasetSpec& spec) {
    std::size_t rep = 1;
    for (const auto& v : spec.variables)
        if (v.variate_type == VariateType::varying_all)
            rep = std::max(rep, static_cast<std::size_t>(v.n_images));
    return saturating_mul(rep, static_cast<std::size_t>(spec.replicates));
}

std::vector<Json> variable_levels(const DatasetSpec& spec, const VariableSpec& var) {
    std::vector<Json> out;
    Rng rng(derive_seed(spec.seed.value_or(0), fnv1a64(var.path)));
    switch (var.variate_type) {
        case VariateType::fixed:
            out.push_back(var.levels);
            break;
        case VariateType::varying_all:
            out.assign(var.levels.begin(), var.levels.end());
            break;
        case VariateType::varying_random:
            for (int k = 0; k < var.n_images; ++k) out.push_back(var.levels[rng.below(var.levels.size())]);
            break;
        case VariateType::varying_among_range:
            if (is_integral(var.levels[0]) && is_integral(var.levels[1])) {
                const auto lo = var.levels[0].get<std::int64_t>();
                const auto hi = var.levels[1].get<std::int64_t>();
                for (auto v = lo; v <= hi; ++v) out.emplace_back(v);
            } else {
                const double lo = var.levels[0].get<double>();
                const double hi = var.levels[1].get<double>();
                for (int k = 0; k < var.n_images; ++k) out.emplace_back(rng.uniform(lo, hi));
            }
            break;
    }
    return out;
}

std::size_t combination_count(const DatasetSpec& spec) {
    std::size_t total = replication_factor(spec);
    for (const auto& v : spec.variables) {
        std::size_t n = 1;
        switch (v.variate_type) {
            case VariateType::fixed: n = 1; break;
            case VariateType::varying_all: n = v.levels.size(); break;
            case VariateType::varying_random: n = static_cast<std::size_t>(v.n_images); break;
            case VariateType::varying_among_range:
                if (is_integral(v.levels[0]) && is_integral(v.levels[1]))
                    n = static_cast<std::size_t>(v.levels[1].get<std::int64_t>() -
                                                 v.levels[0].get<std::int64_t>()) + 1;
                else
                    n = static_cast<std::size_t>(v.n_images);
                break;
        }
        total = saturating_mul(total, n);
    }
    return total;
}

std::vector<ConfigCombination> expand_variables(const DatasetSpec& spec, const ExpansionOptions& options) {
    const std::size_t total = combination_count(spec);
    if (total > options.max_scenes) {
        fail_validation("expansion of '" + spec.name + "' yields " +
                        (total == std::numeric_limits<std::size_t>::max() ? std::string("overflowing")
                                                                          : std::to_string(total)) +
                        " scenes, above the cap of " + std::to_string(options.max_scenes));
    }

    std::vector<std::vector<Json>> levels;
    levels.reserve(spec.variables.size());
    for (const auto& v : spec.variables) levels.push_back(variable_levels(spec, v));
    const std::size_t replication = replication_factor(spec);
    const std::uint64_t seed = spec.seed.value_or(0);

    std::vector<ConfigCombination> out;
    out.reserve(total);
    std::vector<std::size_t> digits(levels.size(), 0);
    std::size_t index = 0;
    for (;;) {
        for (std::size_t rep = 0; rep < replication; ++rep) {
            ConfigCombination combo;
            combo.index = index;
            combo.derived_seed = derive_seed(seed, index);
            for (std::size_t i = 0; i < levels.size(); ++i) {
                const auto& var = spec.variables[i];
                Json value = levels[i][digits[i]];
                if (var.randomize) {
                    Rng rng(derive_seed(combo.derived_seed, i));
                    value = randomized_value(value, var.randomize_percentage, rng);
                }
                combo.assignments[var.path] = std::move(value);
            }
            out.push_back(std::move(combo));
            ++index;
        }
        // Mixed-radix increment, last declared variable fastest.
        std::size_t pos = levels.size();
        while (pos > 0) {
            --pos;
            if (++digits[pos] < levels[pos].size()) break;
            digits[pos] = 0;
            if (pos == 0) return out;
        }
        if (levels.empty()) return out;
    }
}

double resolve_randomization(double base, double percentage, Rng& rng) {
    if (!(percentage >= 0.0 && percentage <= 1.0)) {
        const double clamped = std::isnan(percentage) ? 0.0 : std::clamp(percentage, 0.0, 1.0);
        warn("randomization percentage " + format_real(percentage) + " clamped to " + format_real(clamped));
        percentage = clamped;
    }
    const double lo = base * (1.0 - percentage);
    const double hi = base * (1.0 + percentage);
    return lo + (hi - lo) * rng.uniform01();
}

std::string scene_basename(std::string_view dataset, std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "_%05zu", index);
    return std::string(dataset) + buf;
}

Json expansion_manifest(const DatasetSpec& spec, const std::vector<ConfigCombination>& combos) {
    Json list = Json::array();
    for (const auto& c : combos) {
        const std::string base = scene_basename(spec.name, c.index);
        list.push_back(Json{{"index", c.index},
                            {"seed", c.derived_seed},
                            {"assignments", c.assignments},
                            {"files",
                             {{"image", base + ".png"},
                              {"legend_json", base + ".json"},
                              {"legend_text", base + ".txt"},
                              {"scene", base + ".scene.json"},
                              {"qa", base + ".qa.json"}}}});
    }
    return Json{{"dataset", spec.name},
                {"spec_hash", spec_hash(spec)},
                {"total", combos.size()},
                {"combinations", std::move(list)}};
}

Json apply_assignments(const DatasetSpec& spec, const ConfigCombination& combo) {
    Json scene = spec.base.is_object() ? spec.base : Json::object();
    const std::string game(to_string(spec.game));
    for (const auto& [path, value] : combo.assignments.items()) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (start <= path.size()) {
            std::size_t dot = path.find('.', start);
            if (dot == std::string::npos) dot = path.size();
            parts.push_back(path.substr(start, dot - start));
            start = dot + 1;
        }
        const std::string& head = parts.front();
        if (head == "setup" || head == "noise" || head == "chess" || head == "poker") {
            // literal
        } else if (std::find(kSetupSections.begin(), kSetupSections.end(), head) != kSetupSections.end()) {
            parts.insert(parts.begin(), "setup");
        } else {
            parts.insert(parts.begin(), game);
        }
        Json* node = &scene;
        for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
            Json& child = (*node)[parts[i]];
            if (!child.is_object()) child = Json::object();
            node = &child;
        }
        (*node)[parts.back()] = value;
    }
    return scene;
}

}  // namespace scenediag::config
