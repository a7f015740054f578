#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "common/log.hpp"
#include "diag/report.hpp"
#include "legend/legend.hpp"
#include "pipeline/pipeline.hpp"
#include "qa/oracle.hpp"
#include "render/noise.hpp"
#include "render/project.hpp"
#include "support/brute_force.hpp"
#include "support/fuzz.hpp"
#include "support/temp_dir.hpp"

using namespace scenediag;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    enum { pass, fail, skip } state = fail;
    std::string detail;
};

Outcome pass(std::string d) { return {Outcome::pass, std::move(d)}; }
Outcome fail(std::string d) { return {Outcome::fail, std::move(d)}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
        if (entry.is_regular_file()) out[fs::relative(entry.path(), dir).string()] = testing::slurp(entry.path().string());
    return out;
}

scene::ResolvedScene quiet_resolve(const Json& config, std::uint64_t seed) {
    set_warning_sink([](std::string_view) {});
    auto s = scene::resolve_presets(config, seed);
    set_warning_sink({});
    return s;
}

diag::EvalRecord int_record(long long truth, std::optional<long long> prediction, std::size_t scene,
                            const std::string& key) {
    diag::EvalRecord r;
    r.scene_index = scene;
    r.question_key = key;
    r.truth.kind = qa::AnswerKind::integer;
    r.truth.integer = truth;
    if (prediction) {
        r.answer.kind = vlm::ParsedKind::integer;
        r.answer.integer = *prediction;
    }
    diag::score_record(r);
    return r;
}

Outcome determinism() {
    const std::string spec = testing::data_path("specs/chess_blur.yml");
    testing::TempDir a("acc_det_a"), b("acc_det_b");
    const auto t0 = std::chrono::steady_clock::now();
    pipeline::run_generate_file(spec, a.str());
    const double elapsed = seconds_since(t0);
    pipeline::run_generate_file(spec, b.str());
    const auto sa = snapshot(a.path()), sb = snapshot(b.path());
    int png = 0, json = 0, txt = 0;
    for (const auto& [name, _] : sa) {
        const auto ext = fs::path(name).extension().string();
        const auto stem = fs::path(name).stem().string();
        if (ext == ".png") ++png;
        if (ext == ".txt") ++txt;
        if (ext == ".json" && stem.find('.') == std::string::npos && stem != "manifest" && stem != "spec") ++json;
    }
    std::ostringstream d;
    d << png << " png, " << json << " json, " << txt << " txt; identical=" << (sa == sb) << "; " << elapsed << " s";
    return png == 30 && json == 30 && txt == 30 && sa == sb && elapsed < 60 ? pass(d.str()) : fail(d.str());
}

Outcome expansion_counts() {
    Rng rng(500);
    int mismatches = 0;
    for (int i = 0; i < 500; ++i) {
        const auto spec = config::dataset_spec_from_json(testing::fuzz_dataset_document(rng));
        if (config::expand_variables(spec).size() != testing::brute_force_expansion(spec).size()) ++mismatches;
    }
    const std::string d = "500 specs, " + std::to_string(mismatches) + " mismatches";
    return mismatches == 0 ? pass(d) : fail(d);
}

Outcome oracle_equivalence() {
    const auto& bank = qa::default_question_bank();
    Rng rng(1000);
    std::size_t compared = 0, mismatches = 0;
    for (int game = 0; game < 2; ++game)
        for (int i = 0; i < 1000; ++i) {
            const Json config = game == 0 ? testing::fuzz_chess_config(rng) : testing::fuzz_poker_config(rng);
            const auto scene = quiet_resolve(config, 10000 * (game + 1) + i);
            const auto lg = legend::build_legend(scene);
            for (const auto& key : bank.keys(scene.game)) {
                const auto* t = bank.find(key, scene.game);
                const bool applicable = qa::is_applicable(*t, lg);
                const auto bindings =
                    applicable ? qa::bind_variables(*t, lg) : std::map<std::string, std::string>{};
                const auto brute = testing::brute_force_answer(key, scene, bindings);
                if (applicable != brute.has_value()) {
                    ++mismatches;
                    continue;
                }
                if (!brute) continue;
                const auto g = qa::extract_answer(*t, lg, qa::substitute(t->body, bindings));
                ++compared;
                if (g.kind != brute->kind || g.integer != brute->integer || g.label != brute->label ||
                    g.labels != brute->labels)
                    ++mismatches;
            }
        }
    const std::string d = std::to_string(compared) + " answers compared, " + std::to_string(mismatches) + " mismatches";
    return mismatches == 0 && compared > 0 ? pass(d) : fail(d);
}

Outcome metric_arithmetic() {
    std::vector<diag::EvalRecord> rs;
    for (int t = 1; t <= 5; ++t) rs.push_back(int_record(t, 3, t, "count_pieces"));
    const auto s = diag::compute_suite(rs);
    const auto zero = int_record(0, 2, 0, "count_pieces");
    std::ostringstream d;
    d.precision(15);
    d << "accuracy " << s.accuracy << ", MAE " << s.mae << ", MSE " << s.mse << ", NMAE " << s.nmae
      << ", zero-target " << zero.norm_error.value_or(-1);
    const bool ok = std::abs(s.accuracy - 0.2) < 1e-15 && std::abs(s.mae - 1.2) < 1e-15 && std::abs(s.mse - 2.0) < 1e-15 &&
                    std::abs(s.nmae - 0.63) < 1e-12 && zero.norm_error == 2.0;
    return ok ? pass(d.str()) : fail(d.str());
}

Outcome localization_distance() {
    int mismatches = 0, pairs = 0;
    for (int tr = 0; tr < 4; ++tr)
        for (int tc = 0; tc < 4; ++tc)
            for (int pr = 0; pr < 4; ++pr)
                for (int pc = 0; pc < 4; ++pc) {
                    ++pairs;
                    if (diag::l_loc({tr, tc}, {pr, pc}) != testing::grid_distance(tr, tc, pr, pc)) ++mismatches;
                }
    const std::string d = std::to_string(pairs) + " pairs, " + std::to_string(mismatches) + " mismatches";
    return pairs == 256 && mismatches == 0 ? pass(d) : fail(d);
}

Outcome transcript_parsing() {
    auto score = [](const std::string& text, long long truth, long long* parsed) {
        auto r = int_record(truth, std::nullopt, 0, "count_pieces");
        r.answer = vlm::parse_answer(text, qa::AnswerKind::integer, qa::InstructionKind::declarative,
                                     qa::PrepromptKind::neutral);
        diag::score_record(r);
        if (parsed) *parsed = r.answer.parsed() ? r.answer.integer : -1;
        return r.correct;
    };
    const int counts[] = {10, 10, 8, 9, 8, 8, 12, 10};
    std::string seen;
    int count_correct = 0;
    bool parsed_ok = true;
    for (int c : counts) {
        long long v = -1;
        count_correct += score("The number of pieces in the image is: " + std::to_string(c), 10, &v);
        parsed_ok = parsed_ok && v == c;
        seen += (seen.empty() ? "" : ",") + std::to_string(v);
    }
    const std::pair<int, int> localization[] = {{3, 3}, {3, 3}, {2, 3}, {3, 3}, {2, 1}, {3, 3}, {2, 2}, {3, 3}};
    int loc_correct = 0;
    for (auto [col, row] : localization) {
        loc_correct += score("The column on which the piece is on the board is: " + std::to_string(col), 3, nullptr);
        loc_correct += score("The row on which the piece is on the board is: " + std::to_string(row), 3, nullptr);
    }
    const std::string d = "counting (" + seen + ") -> " + std::to_string(count_correct) + "/8; localization " +
                          std::to_string(loc_correct) + "/16 (expected 12/16)";
    return parsed_ok && count_correct == 3 && loc_correct == 12 ? pass(d) : fail(d);
}

Outcome mock_end_to_end() {
    testing::TempDir dir("acc_e2e");
    const std::string chess = R"(
dataset: {name: e2e_chess, seed: 13}
variables:
  chess.count_config: {variate_type: varying_all, variate_levels: [1, 2, 3, 4, 5, 6, 7, 8, 9, 10], n_images: 5}
base: {setup: {resolution: low}}
)";
    const std::string poker = R"(
dataset: {name: e2e_poker, seed: 17}
variables:
  poker.card_distribution_inputs.overall_cards: {variate_type: varying_all, variate_levels: [2, 3, 4, 5, 6, 7, 8, 9, 10, 11], n_images: 5}
base: {setup: {resolution: low}, game: poker}
)";
    vlm::EndpointSpec endpoint = vlm::load_endpoint_file(testing::data_path("endpoints/mock_oracle.json"));
    pipeline::EvaluateOptions opts;
    opts.preprompts = {qa::PrepromptKind::helpful, qa::PrepromptKind::cot, qa::PrepromptKind::neutral};
    opts.instructions = {qa::InstructionKind::declarative, qa::InstructionKind::missing_word};

    const auto t0 = std::chrono::steady_clock::now();
    std::size_t images = 0, items = 0, bad_tasks = 0, tasks = 0;
    for (const auto& [name, text] : {std::pair{"chess", chess}, std::pair{"poker", poker}}) {
        const std::string out = dir.file(name);
        images += pipeline::run_generate(config::parse_dataset_spec(text), out).total;
        const auto ev = pipeline::run_evaluate(out, endpoint, opts);
        items += ev.items;
        const auto report = pipeline::run_diagnose(out, {}).report;
        for (const auto& [key, suite] : report["tasks"].items()) {
            ++tasks;
            const bool numeric = suite["mae"].is_number();
            if (suite["accuracy"] != 1.0 || suite["unparsed_rate"] != 0.0 || (numeric && suite["mae"] != 0.0)) {
                ++bad_tasks;
                std::fprintf(stderr, "  %s/%s: %s\n", name, key.c_str(), suite.dump().c_str());
            }
        }
    }
    const double elapsed = seconds_since(t0);
    std::ostringstream d;
    d << images << " images, " << items << " items, " << tasks << " tasks, " << bad_tasks << " imperfect; " << elapsed
      << " s";
    return images == 100 && bad_tasks == 0 && tasks > 0 && elapsed < 120 ? pass(d.str()) : fail(d.str());
}

Outcome correlation() {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const auto same = diag::correlate(x, x);
    const auto rev = diag::correlate(x, {9, 7, 4, 2, 1});
    const auto fixture = diag::correlate(x, {2, 5, 1, 3, 4});
    std::ostringstream d;
    d << "identical r=" << same.pearson.value_or(NAN) << " rho=" << same.spearman.value_or(NAN)
      << "; reversed rho=" << rev.spearman.value_or(NAN) << "; fixture r=" << fixture.pearson.value_or(NAN);
    const bool ok = same.defined() && std::abs(*same.pearson - 1) < 1e-12 && std::abs(*same.spearman - 1) < 1e-12 &&
                    rev.defined() && std::abs(*rev.spearman + 1) < 1e-12 && fixture.defined() &&
                    std::abs(*fixture.pearson - 0.2) < 1e-9;
    return ok ? pass(d.str()) : fail(d.str());
}

Outcome band_partition() {
    std::vector<diag::EvalRecord> rs;
    for (int count = 1; count <= 21; ++count)
        for (int s = 0; s < 10; ++s) {
            auto r = int_record(count, count, rs.size(), "count_pieces");
            r.assignments["count"] = count;
            rs.push_back(r);
        }
    const auto table = diag::band_table(rs, "count", diag::default_bands());
    std::size_t covered = 0;
    std::string names;
    for (const auto& row : table.rows) {
        covered += row.n;
        names += (names.empty() ? "" : " ") + row.band.name + ":" + std::to_string(row.n);
    }
    const std::string d = names + "; orphans " + std::to_string(table.orphans.size());
    return table.orphans.empty() && covered == rs.size() && table.rows.size() == 3 ? pass(d) : fail(d);
}

Outcome blur_monotone() {
    const std::string levels[] = {"very_low", "low", "medium", "high", "very_high"};
    std::ostringstream d;
    double previous = INFINITY;
    bool ok = true;
    for (const auto& level : levels) {
        Json config = Json::parse(R"({"setup": {"resolution": "low"}, "chess": {"count_config":
            {"type": "fixed", "value": 8}}})");
        config["noise"] = Json{{"blur", level}};
        const double e = render::high_frequency_energy(render::render_scene(quiet_resolve(config, 77)));
        ok = ok && e < previous;
        previous = e;
        d << level << "=" << e << " ";
    }
    return ok ? pass(d.str()) : fail(d.str());
}

Outcome live_smoke() {
    const char* endpoint_path = std::getenv("SCENEDIAG_LIVE_ENDPOINT");
    if (!endpoint_path || !*endpoint_path) return {Outcome::skip, "set SCENEDIAG_LIVE_ENDPOINT to run"};
    testing::TempDir dir("acc_live");
    const std::string spec = R"(
dataset: {name: live, seed: 5, replicates: 5}
variables:
  chess.count_config: {variate_type: fixed, variate_levels: {type: fixed, value: 1}}
base: {setup: {resolution: low}}
questions: {keys: [count_pieces]}
)";
    pipeline::run_generate(config::parse_dataset_spec(spec), dir.str());
    pipeline::EvaluateOptions opts;
    opts.live = true;
    opts.keys = {"count_pieces"};
    const auto ev = pipeline::run_evaluate(dir.str(), vlm::load_endpoint_file(endpoint_path), opts);
    const double parse_rate =
        ev.items ? static_cast<double>(ev.items - ev.unparsed - ev.failed) / static_cast<double>(ev.items) : 0.0;
    std::ostringstream d;
    d << ev.items << " items, parse rate " << parse_rate << ", input tokens " << ev.usage.input_tokens;
    return ev.items == 5 && parse_rate >= 0.8 && ev.usage.input_tokens > 0 ? pass(d.str()) : fail(d.str());
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"determinism", determinism},
        {"expansion_counts", expansion_counts},
        {"oracle_equivalence", oracle_equivalence},
        {"metric_arithmetic", metric_arithmetic},
        {"localization_distance", localization_distance},
        {"transcript_parsing", transcript_parsing},
        {"mock_end_to_end", mock_end_to_end},
        {"correlation", correlation},
        {"band_table", band_partition},
        {"blur_monotone", blur_monotone},
        {"live_smoke", live_smoke},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        const char* tag = o.state == Outcome::pass ? "PASS" : o.state == Outcome::skip ? "SKIP" : "FAIL";
        std::printf("%s %s: %s\n", tag, name, o.detail.c_str());
        std::fflush(stdout);
        failures += o.state == Outcome::fail;
    }
    return failures == 0 ? 0 : 1;
}
