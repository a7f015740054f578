#include "pipeline/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "common/log.hpp"
#include "common/version.hpp"
#include "qa/oracle.hpp"
#include "render/png_io.hpp"
#include "render/project.hpp"
#include "scene/resolved_scene.hpp"
#include "vlm/answer_parser.hpp"

namespace scenediag::pipeline {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kStatusNames[] = {"pending", "rendered", "evaluated", "scored"};

const qa::QuestionBank& bank_or_default(const qa::QuestionBank* bank) {
    return bank ? *bank : qa::default_question_bank();
}

std::string join_path(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

Json read_json_file(const std::string& path) {
    const std::string text = read_text_file(path);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail_validation(path + ": malformed JSON: " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) { write_text_file_atomic(path, j.dump(2) + "\n"); }

std::vector<std::uint8_t> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_io("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<Json> read_jsonl(const std::string& path) {
    std::vector<Json> out;
    if (!fs::exists(path)) return out;
    std::istringstream in(read_text_file(path));
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        try {
            out.push_back(Json::parse(line));
        } catch (const nlohmann::json::exception&) {
            fail_validation(path + ":" + std::to_string(n) + ": malformed JSON line");
        }
    }
    return out;
}

template <typename T>
void write_jsonl(const std::string& path, const std::vector<T>& items) {
    std::string text;
    for (const auto& item : items) text += to_json(item).dump() + "\n";
    write_text_file_atomic(path, text);
}

void add_artifact(Json& manifest, const std::string& name) {
    Json& list = manifest["artifacts"];
    if (!list.is_array()) list = Json::array();
    if (std::find(list.begin(), list.end(), Json(name)) == list.end()) list.push_back(name);
}

Json load_manifest(const std::string& dir) {
    const std::string path = join_path(dir, "manifest.json");
    if (!fs::exists(path)) fail_io(dir + ": no manifest.json (run generate first)");
    return read_json_file(path);
}

std::vector<std::string> split_list(const Json& j) {
    std::vector<std::string> out;
    if (j.is_string()) out.push_back(j.get<std::string>());
    else if (j.is_array())
        for (const auto& v : j) out.push_back(v.get<std::string>());
    return out;
}

bool files_exist(const std::string& dir, const Json& files) {
    for (auto it = files.begin(); it != files.end(); ++it)
        if (!fs::exists(join_path(dir, it->get<std::string>()))) return false;
    return true;
}

std::string request_id(const std::string& base, const qa::RenderedQuestion& q) {
    return base + "|" + q.key + "|" + std::string(qa::to_string(q.preprompt)) + "|" +
           std::string(qa::to_string(q.instruction));
}

}  // namespace

std::string_view to_string(Status s) { return kStatusNames[static_cast<int>(s)]; }

std::optional<Status> status_from_string(std::string_view name) {
    for (int i = 0; i < 4; ++i)
        if (kStatusNames[i] == name) return static_cast<Status>(i);
    return std::nullopt;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::validation:
        case ErrorKind::config: return kExitValidation;
        case ErrorKind::io: return kExitIo;
        case ErrorKind::network: return kExitPartial;
        case ErrorKind::internal: return kExitUsage;
    }
    return kExitUsage;
}

QuestionGrid question_grid_from_json(const Json& j) {
    QuestionGrid g;
    if (!j.is_object()) return g;
    g.keys = split_list(j.value("keys", Json()));
    if (j.contains("preprompts")) {
        g.preprompts.clear();
        for (const auto& name : split_list(j["preprompts"])) {
            auto p = qa::preprompt_from_string(name);
            if (!p) fail_validation("questions.preprompts: unknown preprompt '" + name + "'");
            g.preprompts.push_back(*p);
        }
    }
    if (j.contains("instructions")) {
        g.instructions.clear();
        for (const auto& name : split_list(j["instructions"])) {
            auto i = qa::instruction_from_string(name);
            if (!i) fail_validation("questions.instructions: unknown instruction '" + name + "'");
            g.instructions.push_back(*i);
        }
    }
    return g;
}

Json build_qa(const qa::QuestionBank& bank, const legend::Legend& legend, const QuestionGrid& grid) {
    const auto game = config::game_from_string(legend.game).value_or(config::Game::chess);
    std::vector<std::string> keys = grid.keys.empty() ? bank.keys(game) : grid.keys;
    Json items = Json::array(), skipped = Json::array();
    for (const auto& key : keys) {
        const qa::QuestionTemplate* t = bank.find(key, game);
        if (!t) fail_validation("questions.keys: unknown key '" + key + "' for " + legend.game);
        if (!qa::is_applicable(*t, legend)) {
            skipped.push_back(key);
            continue;
        }
        for (const auto& c : qa::enumerate_combinations({key}, grid.preprompts, grid.instructions)) {
            const auto q = qa::instantiate_question(bank, key, game, legend, c.preprompt, c.instruction);
            auto truth = qa::extract_answer(*t, legend, q.question);
            items.push_back(Json{{"key", key},
                                 {"prompt", q.prompt},
                                 {"preprompt", std::string(qa::to_string(c.preprompt))},
                                 {"instruction", std::string(qa::to_string(c.instruction))},
                                 {"answer_kind", std::string(qa::to_string(t->answer))},
                                 {"ground_truth", qa::to_json(truth)}});
        }
    }
    return Json{{"game", legend.game}, {"bank_version", bank.version}, {"items", std::move(items)},
                {"skipped_keys", std::move(skipped)}};
}

GenerateResult run_generate(const config::DatasetSpec& spec_in, const std::string& out_dir,
                            const GenerateOptions& options) {
    config::DatasetSpec spec = spec_in;
    if (options.seed) spec.seed = *options.seed;
    const auto& bank = bank_or_default(options.bank);
    const QuestionGrid grid = question_grid_from_json(spec.questions);
    const auto combos = config::expand_variables(spec);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) fail_io("cannot create " + out_dir + ": " + ec.message());

    const std::string manifest_path = join_path(out_dir, "manifest.json");
    Json manifest = config::expansion_manifest(spec, combos);
    manifest["tool_version"] = kVersion;
    std::vector<Status> status(combos.size(), Status::pending);
    if (fs::exists(manifest_path)) {
        const Json old = read_json_file(manifest_path);
        if (old.value("spec_hash", "") != manifest["spec_hash"].get<std::string>())
            fail_validation(out_dir + ": spec hash mismatch with the existing manifest; use a fresh output directory");
        const Json& old_list = old.at("combinations");
        for (std::size_t i = 0; i < combos.size() && i < old_list.size(); ++i) {
            auto s = status_from_string(old_list[i].value("status", "pending"));
            if (s && *s != Status::pending && files_exist(out_dir, old_list[i].at("files"))) status[i] = *s;
        }
        if (old.contains("artifacts")) manifest["artifacts"] = old["artifacts"];
    }
    write_json_file(join_path(out_dir, "spec.json"), config::to_json(spec));
    add_artifact(manifest, "spec.json");
    add_artifact(manifest, "manifest.json");

    auto save = [&] {
        for (std::size_t i = 0; i < combos.size(); ++i)
            manifest["combinations"][i]["status"] = std::string(to_string(status[i]));
        write_json_file(manifest_path, manifest);
    };

    GenerateResult result;
    result.total = combos.size();
    for (std::size_t i = 0; i < combos.size(); ++i) {
        if (status[i] != Status::pending) {
            ++result.skipped;
            continue;
        }
        if (result.rendered >= options.max_new_scenes) break;
        const auto& combo = combos[i];
        const Json& files = manifest["combinations"][i]["files"];
        const Json scene_config = config::apply_assignments(spec, combo);
        scene::ResolvedScene scene;
        try {
            scene = scene::resolve_presets(scene_config, combo.derived_seed, spec.piece_set);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::validation) throw;
            fail_validation("scene " + std::to_string(i) + ": " + e.what());
        }
        const auto violations = scene::validate_scene(scene);
        if (!violations.empty()) {
            std::string msg = "scene " + std::to_string(i) + ": invalid scene";
            for (const auto& v : violations) msg += "\n  " + v;
            fail_validation(msg);
        }
        const auto image = render::render_scene(scene);
        render::write_png(join_path(out_dir, files["image"]), image);
        const legend::Legend lg = legend::build_legend(scene);
        write_json_file(join_path(out_dir, files["legend_json"]), legend::render_legend_json(lg));
        write_text_file_atomic(join_path(out_dir, files["legend_text"]), legend::render_legend_text(lg));
        write_json_file(join_path(out_dir, files["scene"]), scene::export_scene_spec(scene));
        write_json_file(join_path(out_dir, files["qa"]), build_qa(bank, lg, grid));
        status[i] = Status::rendered;
        ++result.rendered;
        save();
    }
    save();
    result.complete = std::none_of(status.begin(), status.end(), [](Status s) { return s == Status::pending; });
    result.manifest = manifest;
    return result;
}

GenerateResult run_generate_file(const std::string& spec_path, const std::string& out_dir,
                                 const GenerateOptions& options) {
    return run_generate(config::parse_dataset_spec(read_text_file(spec_path)), out_dir, options);
}

EvaluateResult run_evaluate(const std::string& dir, const vlm::EndpointSpec& endpoint, const EvaluateOptions& options) {
    if (!vlm::is_mock(endpoint.flavor) && !options.live)
        throw Error(ErrorKind::config, "endpoint " + endpoint.name + " is not a mock; pass --live to send real requests");
    const auto& bank = bank_or_default(options.bank);
    Json manifest = load_manifest(dir);
    const std::string exchanges_path = join_path(dir, "exchanges.jsonl");

    std::map<std::string, vlm::ChatExchange> cache;
    for (const auto& j : read_jsonl(exchanges_path)) {
        auto x = vlm::exchange_from_json(j);
        if (x.ok) cache[x.id] = std::move(x);
    }

    EvaluateResult result;
    std::vector<vlm::ChatExchange> exchanges;
    std::vector<diag::EvalRecord> records;
    Json& list = manifest["combinations"];
    for (std::size_t i = 0; i < list.size(); ++i) {
        Json& entry = list[i];
        auto st = status_from_string(entry.value("status", "pending")).value_or(Status::pending);
        if (st == Status::pending) continue;
        const Json& files = entry["files"];
        const std::string image_name = files["image"].get<std::string>();
        const std::string base = image_name.substr(0, image_name.size() - 4);
        const legend::Legend lg = legend::parse_legend_json(read_json_file(join_path(dir, files["legend_json"])));
        const auto game = config::game_from_string(lg.game).value_or(config::Game::chess);

        std::vector<std::string> keys = options.keys;
        if (keys.empty()) {
            const Json qa_doc = read_json_file(join_path(dir, files["qa"]));
            for (const auto& item : qa_doc.at("items")) {
                const std::string k = item.at("key").get<std::string>();
                if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
            }
        }

        struct Item {
            const qa::QuestionTemplate* t;
            qa::RenderedQuestion q;
            qa::GroundTruth truth;
        };
        std::vector<Item> items;
        for (const auto& key : keys) {
            const qa::QuestionTemplate* t = bank.find(key, game);
            if (!t) fail_validation("evaluate: unknown key '" + key + "' for " + lg.game);
            if (!qa::is_applicable(*t, lg)) continue;
            for (const auto& c : qa::enumerate_combinations({key}, options.preprompts, options.instructions)) {
                auto q = qa::instantiate_question(bank, key, game, lg, c.preprompt, c.instruction);
                auto truth = qa::extract_answer(*t, lg, q.question);
                truth.source = files["legend_json"].get<std::string>();
                items.push_back({t, std::move(q), std::move(truth)});
            }
        }
        if (items.empty()) continue;

        std::vector<std::uint8_t> image;
        std::vector<vlm::ChatRequest> pending;
        std::vector<std::size_t> pending_index;
        std::vector<vlm::ChatExchange> scene_exchanges(items.size());
        for (std::size_t k = 0; k < items.size(); ++k) {
            const std::string id = request_id(base, items[k].q);
            if (auto it = cache.find(id); it != cache.end() && it->second.prompt == items[k].q.prompt) {
                scene_exchanges[k] = it->second;
                ++result.reused;
                continue;
            }
            if (image.empty()) image = read_bytes(join_path(dir, image_name));
            vlm::ChatRequest r;
            r.id = id;
            r.prompt = items[k].q.prompt;
            r.image = image;
            r.oracle_text = qa::oracle_response(*items[k].t, items[k].q, items[k].truth);
            pending.push_back(std::move(r));
            pending_index.push_back(k);
        }
        auto fresh = vlm::query_batch(endpoint, pending, options.query);
        for (std::size_t p = 0; p < fresh.size(); ++p) scene_exchanges[pending_index[p]] = std::move(fresh[p]);

        bool complete = true;
        for (std::size_t k = 0; k < items.size(); ++k) {
            const auto& x = scene_exchanges[k];
            ++result.items;
            exchanges.push_back(x);
            if (!x.ok) {
                ++result.failed;
                complete = false;
                continue;
            }
            ++result.succeeded;
            diag::EvalRecord rec;
            rec.scene_index = entry.value("index", i);
            rec.image = image_name;
            rec.question_key = items[k].q.key;
            rec.game = lg.game;
            rec.assignments = entry.value("assignments", Json::object());
            rec.preprompt = std::string(qa::to_string(items[k].q.preprompt));
            rec.instruction = std::string(qa::to_string(items[k].q.instruction));
            rec.truth = items[k].truth;
            rec.answer = vlm::parse_answer(x.response_text, items[k].t->answer, items[k].q.instruction,
                                           items[k].q.preprompt, qa::vocabulary(*items[k].t, lg));
            rec.exchange_id = x.id;
            diag::score_record(rec);
            if (rec.unparsed) ++result.unparsed;
            records.push_back(std::move(rec));
        }
        entry["status"] = std::string(to_string(complete ? Status::scored : Status::rendered));
    }

    write_jsonl(exchanges_path, exchanges);
    write_jsonl(join_path(dir, "records.jsonl"), records);
    result.usage = vlm::accumulate_usage(exchanges, endpoint.price_in_per_million, endpoint.price_out_per_million);
    Json preprompts = Json::array(), instructions = Json::array();
    for (auto p : options.preprompts) preprompts.push_back(std::string(qa::to_string(p)));
    for (auto in : options.instructions) instructions.push_back(std::string(qa::to_string(in)));
    write_json_file(join_path(dir, "evaluation.json"),
                    Json{{"endpoint", vlm::to_json(endpoint)},
                         {"preprompts", preprompts},
                         {"instructions", instructions},
                         {"keys", options.keys},
                         {"items", result.items},
                         {"succeeded", result.succeeded},
                         {"failed", result.failed},
                         {"reused", result.reused},
                         {"unparsed", result.unparsed},
                         {"usage", vlm::to_json(result.usage)}});
    for (const char* name : {"exchanges.jsonl", "records.jsonl", "evaluation.json"}) add_artifact(manifest, name);
    write_json_file(join_path(dir, "manifest.json"), manifest);
    result.exit_code = result.failed > 0 ? kExitPartial : kExitOk;
    return result;
}

std::vector<diag::EvalRecord> read_records(const std::string& path) {
    std::vector<diag::EvalRecord> out;
    for (const auto& j : read_jsonl(path)) out.push_back(diag::eval_record_from_json(j));
    return out;
}

DiagnoseResult run_diagnose(const std::string& dir, const diag::ReportConfig& config) {
    Json manifest = load_manifest(dir);
    const std::string records_path = join_path(dir, "records.jsonl");
    if (!fs::exists(records_path)) fail_io(dir + ": no records.jsonl (run evaluate first)");
    const auto records = read_records(records_path);
    DiagnoseResult result;
    result.records = records.size();
    result.report = diag::build_report(records, config);
    const std::string eval_path = join_path(dir, "evaluation.json");
    if (fs::exists(eval_path)) result.report["usage"] = read_json_file(eval_path).value("usage", Json());

    write_json_file(join_path(dir, "report.json"), result.report);
    write_text_file_atomic(join_path(dir, "report.csv"), diag::report_csv(result.report));
    std::error_code ec;
    fs::create_directories(join_path(dir, "plots"), ec);
    if (ec) fail_io("cannot create " + join_path(dir, "plots") + ": " + ec.message());
    add_artifact(manifest, "report.json");
    add_artifact(manifest, "report.csv");
    for (const auto& [name, text] : diag::plot_csvs(records, result.report)) {
        write_text_file_atomic(join_path(dir, "plots/" + name + ".csv"), text);
        add_artifact(manifest, "plots/" + name + ".csv");
    }
    write_json_file(join_path(dir, "manifest.json"), manifest);
    return result;
}

}  // namespace scenediag::pipeline
