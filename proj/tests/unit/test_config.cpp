#include <doctest.h>

#include <set>

#include "config/config_core.hpp"
#include "support/brute_force.hpp"
#include "support/fuzz.hpp"
#include "support/temp_dir.hpp"

using namespace scenediag;
using namespace scenediag::config;

namespace {

const char* kBlurSpec = R"(
dataset:
  name: chess_blur
  output_dir: out
  seed: 42
  piece_set: old_school
variables:
  chess.count_config:
    variate_type: fixed
    variate_levels:
      type: fixed
      value: 3
      randomization: false
  noise.blur:
    variate_type: varying_all
    variate_levels: [none, very_low, low, medium, high, very_high]
    n_images: 5
)";

DatasetSpec two_var_spec() {
    return parse_dataset_spec(R"({
      "dataset": {"name": "ab", "seed": 1},
      "variables": {
        "a": {"variate_type": "varying_all", "variate_levels": [1, 2, 3], "n_images": 2},
        "b": {"variate_type": "varying_all", "variate_levels": ["x", "y"], "n_images": 1}
      }})");
}

}  // namespace

TEST_CASE("blur sweep expands to 30 combinations") {
    const auto spec = parse_dataset_spec(kBlurSpec);
    CHECK(spec.piece_set == PieceSet::old_school);
    CHECK(spec.variables.size() == 2);
    CHECK(combination_count(spec) == 30);
    const auto combos = expand_variables(spec);
    REQUIRE(combos.size() == 30);
    CHECK(combos[0].assignments["noise.blur"] == "none");
    CHECK(combos[4].assignments["noise.blur"] == "none");
    CHECK(combos[5].assignments["noise.blur"] == "very_low");
    CHECK(combos[29].assignments["noise.blur"] == "very_high");
    for (const auto& c : combos) CHECK(c.assignments["chess.count_config"] == 3);
}

TEST_CASE("two varying_all variables give 12 combinations in declaration order") {
    const auto spec = two_var_spec();
    const auto combos = expand_variables(spec);
    REQUIRE(combos.size() == 12);
    const auto brute = testing::brute_force_expansion(spec);
    REQUIRE(brute.size() == combos.size());
    const std::vector<Json> a{1, 2, 3};
    const std::vector<Json> b{"x", "y"};
    for (std::size_t i = 0; i < combos.size(); ++i) {
        CHECK(combos[i].index == i);
        CHECK(combos[i].assignments["a"] == a[brute[i][0]]);
        CHECK(combos[i].assignments["b"] == b[brute[i][1]]);
    }
}

TEST_CASE("spec without variables expands to one scene") {
    const auto spec = parse_dataset_spec("dataset:\n  name: single\n");
    CHECK(expand_variables(spec).size() == 1);
}

TEST_CASE("fuzzed specs expand to the brute-force count") {
    Rng rng(2024);
    for (int i = 0; i < 200; ++i) {
        const Json doc = testing::fuzz_dataset_document(rng);
        const auto spec = dataset_spec_from_json(doc);
        const auto combos = expand_variables(spec);
        const auto brute = testing::brute_force_expansion(spec);
        REQUIRE(combos.size() == brute.size());
        CHECK(combination_count(spec) == combos.size());
        for (std::size_t k = 0; k < combos.size(); ++k)
            for (std::size_t v = 0; v < spec.variables.size(); ++v) {
                const auto& var = spec.variables[v];
                const Json& got = combos[k].assignments[var.path];
                if (var.variate_type == VariateType::varying_all) CHECK(got == var.levels[brute[k][v]]);
                if (var.variate_type == VariateType::fixed) CHECK(got == var.levels);
            }
    }
}

TEST_CASE("expansion is deterministic and seeds are distinct") {
    Rng rng(5);
    for (int i = 0; i < 30; ++i) {
        const auto spec = dataset_spec_from_json(testing::fuzz_dataset_document(rng));
        const auto a = expand_variables(spec);
        const auto b = expand_variables(spec);
        std::set<std::uint64_t> seeds;
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(a[k].assignments == b[k].assignments);
            CHECK(a[k].derived_seed == b[k].derived_seed);
            seeds.insert(a[k].derived_seed);
        }
        CHECK(seeds.size() == a.size());
    }
}

TEST_CASE("random draws stay inside their level set or interval") {
    const auto spec = parse_dataset_spec(R"({
      "dataset": {"name": "r", "seed": 9},
      "variables": {
        "t": {"variate_type": "varying_random", "variate_levels": ["pawn", "rook"], "n_images": 6},
        "d": {"variate_type": "varying_among_range", "variate_levels": [1.5, 2.5], "n_images": 3},
        "k": {"variate_type": "varying_all_range", "variate_levels": [2, 5]}
      }})");
    CHECK(spec.variables[2].variate_type == VariateType::varying_among_range);
    const auto combos = expand_variables(spec);
    CHECK(combos.size() == 6 * 3 * 4);
    std::set<long long> ks;
    for (const auto& c : combos) {
        const auto t = c.assignments["t"].get<std::string>();
        CHECK((t == "pawn" || t == "rook"));
        const double d = c.assignments["d"].get<double>();
        CHECK(d >= 1.5);
        CHECK(d <= 2.5);
        ks.insert(c.assignments["k"].get<long long>());
    }
    CHECK(ks == std::set<long long>{2, 3, 4, 5});
}

TEST_CASE("alias variate kinds are canonicalized") {
    const auto spec = parse_dataset_spec(R"({
      "dataset": {"name": "x", "seed": 1},
      "variables": {"a": {"variate_type": "varying_among", "variate_levels": [1, 2]}}})");
    CHECK(spec.variables[0].variate_type == VariateType::varying_random);
}

TEST_CASE("malformed specs are rejected with a path") {
    auto message = [](const char* text) {
        try {
            parse_dataset_spec(text);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::validation);
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("dataset:\n  name: a\nvariables:\n  x:\n    variate_type: sometimes\n    variate_levels: [1]\n")
              .find("variate_type") != std::string::npos);
    CHECK(message("dataset:\n  name: a\n  seed: 1\nvariables:\n  x:\n    variate_type: varying_all\n    variate_levels: []\n")
              .find("variate_levels") != std::string::npos);
    CHECK(message("dataset:\n  name: a\nvariables:\n  x:\n    variate_type: varying_random\n    variate_levels: [1, 2]\n")
              .find("seed") != std::string::npos);
    CHECK(message("dataset:\n  name: a\n  seed: 1\nvariables:\n  x:\n    variate_type: varying_among_range\n"
                  "    variate_levels: [5, 1]\n")
              .find("min exceeds max") != std::string::npos);
    CHECK(message("dataset:\n  name: a\n  replicates: 0\n").find("replicates") != std::string::npos);
    CHECK(message("- just\n- a list\n").find("document") != std::string::npos);
}

TEST_CASE("canonical document round-trips and hashes stably") {
    const auto spec = parse_dataset_spec(kBlurSpec);
    const auto again = parse_dataset_spec(to_json(spec).dump());
    CHECK(again == spec);
    CHECK(spec_hash(spec) == spec_hash(again));
    auto changed = spec;
    changed.seed = 43;
    CHECK(spec_hash(changed) != spec_hash(spec));
}

TEST_CASE("expansion cap refuses oversized sweeps") {
    const auto spec = two_var_spec();
    ExpansionOptions small;
    small.max_scenes = 11;
    CHECK_THROWS_AS(expand_variables(spec, small), Error);
}

TEST_CASE("randomization stays within the percentage band") {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double v = resolve_randomization(10.0, 0.2, rng);
        CHECK(v >= 8.0);
        CHECK(v <= 12.0);
    }
    CHECK(resolve_randomization(4.0, 0.0, rng) == 4.0);
}

TEST_CASE("scene basenames are zero padded") {
    CHECK(scene_basename("chess_blur", 7) == "chess_blur_00007");
    CHECK(scene_basename("d", 123456) == "d_123456");
}

TEST_CASE("assignments land in the right section") {
    auto spec = parse_dataset_spec(R"({
      "dataset": {"name": "p"},
      "base": {"chess": {"board": {"rows": 4}}},
      "variables": {
        "camera.distance": {"variate_type": "fixed", "variate_levels": "far"},
        "noise.blur": {"variate_type": "fixed", "variate_levels": "low"},
        "count_config": {"variate_type": "fixed", "variate_levels": 2}
      }})");
    const auto combos = expand_variables(spec);
    const Json scene = apply_assignments(spec, combos[0]);
    CHECK(scene["setup"]["camera"]["distance"] == "far");
    CHECK(scene["noise"]["blur"] == "low");
    CHECK(scene["chess"]["count_config"] == 2);
    CHECK(scene["chess"]["board"]["rows"] == 4);
}

TEST_CASE("manifest preview lists every combination with its files") {
    const auto spec = two_var_spec();
    const auto combos = expand_variables(spec);
    const Json m = expansion_manifest(spec, combos);
    CHECK(m["total"] == 12);
    CHECK(m["spec_hash"] == spec_hash(spec));
    REQUIRE(m["combinations"].size() == 12);
    CHECK(m["combinations"][3]["files"]["image"] == "ab_00003.png");
    CHECK(m["combinations"][3]["files"]["legend_text"] == "ab_00003.txt");
}

TEST_CASE("shipped dataset specs parse") {
    for (const char* name : {"chess_blur", "chess_count", "chess_localization", "poker_count", "poker_overlap",
                             "poker_grid"}) {
        INFO(name);
        const auto spec = parse_dataset_spec(testing::slurp(testing::data_path(std::string("specs/") + name + ".yml")));
        CHECK(expand_variables(spec).size() >= 16);
    }
}
