#include "scenediag/scenediag.h"

#include <cstdlib>
#include <cstring>
#include <mutex>
#include <string>

#include "common/log.hpp"
#include "common/version.hpp"
#include "config/config_core.hpp"
#include "legend/legend.hpp"
#include "pipeline/pipeline.hpp"
#include "qa/oracle.hpp"
#include "qa/question_bank.hpp"
#include "render/png_io.hpp"
#include "render/project.hpp"
#include "scene/resolved_scene.hpp"
#include "vlm/answer_parser.hpp"

using namespace scenediag;

struct sd_dataset {
    config::DatasetSpec spec;
};

struct sd_scene {
    scene::ResolvedScene scene;
};

struct sd_bank {
    qa::QuestionBank bank;
};

namespace {

thread_local std::string g_last_error;

sd_status status_of(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::validation: return SD_ERR_VALIDATION;
        case ErrorKind::io: return SD_ERR_IO;
        case ErrorKind::config: return SD_ERR_CONFIG;
        case ErrorKind::network: return SD_ERR_NETWORK;
        case ErrorKind::internal: return SD_ERR_INTERNAL;
    }
    return SD_ERR_INTERNAL;
}

template <typename F>
sd_status guarded(F&& body) {
    try {
        body();
        g_last_error.clear();
        return SD_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e.kind());
    } catch (const nlohmann::json::exception& e) {
        g_last_error = e.what();
        return SD_ERR_VALIDATION;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SD_ERR_INTERNAL;
    }
}

sd_status bad_argument(const char* what) {
    g_last_error = std::string("invalid argument: ") + what;
    return SD_ERR_ARGUMENT;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

Json parse_json_arg(const char* text, const char* what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail_validation(std::string(what) + ": malformed JSON: " + e.what());
    }
}

Json parse_options(const char* text) {
    if (!text || !*text) return Json::object();
    Json j = parse_json_arg(text, "options");
    if (!j.is_object()) fail_validation("options: expected an object");
    return j;
}

config::Game game_arg(const char* name) {
    auto g = config::game_from_string(name ? name : "");
    if (!g) fail_validation(std::string("unknown game '") + (name ? name : "") + "'");
    return *g;
}

qa::PrepromptKind preprompt_arg(std::string_view name) {
    auto p = qa::preprompt_from_string(name);
    if (!p) fail_validation("unknown preprompt '" + std::string(name) + "'");
    return *p;
}

qa::InstructionKind instruction_arg(std::string_view name) {
    auto i = qa::instruction_from_string(name);
    if (!i) fail_validation("unknown instruction '" + std::string(name) + "'");
    return *i;
}

std::vector<std::string> string_list(const Json& j, const char* what) {
    std::vector<std::string> out;
    if (j.is_null()) return out;
    if (j.is_string()) return {j.get<std::string>()};
    if (!j.is_array()) fail_validation(std::string(what) + ": expected a list of strings");
    for (const auto& v : j) {
        if (!v.is_string()) fail_validation(std::string(what) + ": expected a list of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

const qa::QuestionBank* bank_option(const Json& options, qa::QuestionBank& storage) {
    if (!options.contains("bank")) return nullptr;
    storage = qa::load_question_bank_file(options["bank"].get<std::string>());
    return &storage;
}

std::mutex g_warning_mutex;

}  // namespace

extern "C" {

const char* sd_version(void) { return kVersion; }

const char* sd_last_error(void) { return g_last_error.c_str(); }

int sd_exit_code(sd_status status) {
    switch (status) {
        case SD_OK: return pipeline::kExitOk;
        case SD_ERR_VALIDATION:
        case SD_ERR_CONFIG: return pipeline::kExitValidation;
        case SD_ERR_NETWORK: return pipeline::kExitPartial;
        case SD_ERR_IO: return pipeline::kExitIo;
        default: return pipeline::kExitUsage;
    }
}

void sd_string_free(char* text) { std::free(text); }

void sd_buffer_free(uint8_t* data) { std::free(data); }

void sd_set_warning_callback(sd_warning_fn fn, void* user) {
    std::lock_guard lock(g_warning_mutex);
    if (!fn) {
        set_warning_sink({});
        return;
    }
    set_warning_sink([fn, user](std::string_view message) {
        const std::string copy(message);
        fn(copy.c_str(), user);
    });
}

sd_status sd_dataset_parse(const char* text, sd_dataset** out) {
    if (!text || !out) return bad_argument("text/out");
    return guarded([&] { *out = new sd_dataset{config::parse_dataset_spec(text)}; });
}

sd_status sd_dataset_load(const char* path, sd_dataset** out) {
    if (!path || !out) return bad_argument("path/out");
    return guarded([&] { *out = new sd_dataset{config::parse_dataset_spec(read_text_file(path))}; });
}

void sd_dataset_free(sd_dataset* dataset) { delete dataset; }

sd_status sd_dataset_count(const sd_dataset* dataset, size_t* out) {
    if (!dataset || !out) return bad_argument("dataset/out");
    return guarded([&] { *out = config::combination_count(dataset->spec); });
}

sd_status sd_dataset_hash(const sd_dataset* dataset, char** out) {
    if (!dataset || !out) return bad_argument("dataset/out");
    return guarded([&] { *out = dup_string(config::spec_hash(dataset->spec)); });
}

sd_status sd_dataset_expand(const sd_dataset* dataset, char** out_json) {
    if (!dataset || !out_json) return bad_argument("dataset/out_json");
    return guarded([&] {
        const auto combos = config::expand_variables(dataset->spec);
        *out_json = dup_string(config::expansion_manifest(dataset->spec, combos).dump(2));
    });
}

sd_status sd_dataset_scene(const sd_dataset* dataset, size_t index, sd_scene** out) {
    if (!dataset || !out) return bad_argument("dataset/out");
    return guarded([&] {
        const auto combos = config::expand_variables(dataset->spec);
        if (index >= combos.size())
            fail_validation("combination " + std::to_string(index) + " out of range (" +
                            std::to_string(combos.size()) + ")");
        const Json config = config::apply_assignments(dataset->spec, combos[index]);
        *out = new sd_scene{scene::resolve_presets(config, combos[index].derived_seed, dataset->spec.piece_set)};
    });
}

sd_status sd_scene_resolve(const char* config_json, uint64_t seed, sd_scene** out) {
    if (!config_json || !out) return bad_argument("config_json/out");
    return guarded([&] { *out = new sd_scene{scene::resolve_presets(parse_structured_text(config_json), seed)}; });
}

sd_status sd_scene_import(const char* scene_spec_json, sd_scene** out) {
    if (!scene_spec_json || !out) return bad_argument("scene_spec_json/out");
    return guarded([&] { *out = new sd_scene{scene::import_scene_spec(parse_json_arg(scene_spec_json, "scene spec"))}; });
}

void sd_scene_free(sd_scene* scene) { delete scene; }

sd_status sd_scene_validate(const sd_scene* scene, char** out_json) {
    if (!scene || !out_json) return bad_argument("scene/out_json");
    return guarded([&] { *out_json = dup_string(Json(scene::validate_scene(scene->scene)).dump()); });
}

sd_status sd_scene_export(const sd_scene* scene, char** out_json) {
    if (!scene || !out_json) return bad_argument("scene/out_json");
    return guarded([&] { *out_json = dup_string(scene::export_scene_spec(scene->scene).dump(2)); });
}

sd_status sd_scene_render_png(const sd_scene* scene, uint8_t** out_data, size_t* out_size) {
    if (!scene || !out_data || !out_size) return bad_argument("scene/out_data/out_size");
    return guarded([&] {
        const auto bytes = render::encode_png(render::render_scene(scene->scene));
        auto* data = static_cast<uint8_t*>(std::malloc(bytes.size()));
        if (!data) throw std::bad_alloc();
        std::memcpy(data, bytes.data(), bytes.size());
        *out_data = data;
        *out_size = bytes.size();
    });
}

sd_status sd_scene_write_png(const sd_scene* scene, const char* path) {
    if (!scene || !path) return bad_argument("scene/path");
    return guarded([&] { render::write_png(path, render::render_scene(scene->scene)); });
}

sd_status sd_scene_legend_json(const sd_scene* scene, char** out_json) {
    if (!scene || !out_json) return bad_argument("scene/out_json");
    return guarded([&] {
        *out_json = dup_string(legend::render_legend_json(legend::build_legend(scene->scene)).dump(2));
    });
}

sd_status sd_scene_legend_text(const sd_scene* scene, char** out_text) {
    if (!scene || !out_text) return bad_argument("scene/out_text");
    return guarded([&] { *out_text = dup_string(legend::render_legend_text(legend::build_legend(scene->scene))); });
}

sd_status sd_bank_default(sd_bank** out) {
    if (!out) return bad_argument("out");
    return guarded([&] { *out = new sd_bank{qa::default_question_bank()}; });
}

sd_status sd_bank_load(const char* path, sd_bank** out) {
    if (!path || !out) return bad_argument("path/out");
    return guarded([&] { *out = new sd_bank{qa::load_question_bank_file(path)}; });
}

void sd_bank_free(sd_bank* bank) { delete bank; }

sd_status sd_bank_keys(const sd_bank* bank, const char* game, char** out_json) {
    if (!bank || !out_json) return bad_argument("bank/out_json");
    return guarded([&] { *out_json = dup_string(Json(bank->bank.keys(game_arg(game))).dump()); });
}

sd_status sd_question_instantiate(const sd_bank* bank, const char* key, const char* legend_json,
                                  const char* preprompt, const char* instruction, char** out_json) {
    if (!bank || !key || !legend_json || !preprompt || !instruction || !out_json)
        return bad_argument("bank/key/legend_json/preprompt/instruction/out_json");
    return guarded([&] {
        const auto lg = legend::parse_legend_json(parse_json_arg(legend_json, "legend"));
        const auto game = game_arg(lg.game.c_str());
        const qa::QuestionTemplate* t = bank->bank.find(key, game);
        if (!t) fail_validation(std::string("unknown key '") + key + "' for " + lg.game);
        const auto q =
            qa::instantiate_question(bank->bank, key, game, lg, preprompt_arg(preprompt), instruction_arg(instruction));
        Json j = qa::to_json(q);
        j["ground_truth"] = qa::to_json(qa::extract_answer(*t, lg, q.question));
        j["vocabulary"] = qa::vocabulary(*t, lg);
        *out_json = dup_string(j.dump(2));
    });
}

sd_status sd_question_extract(const sd_bank* bank, const char* key, const char* legend_json,
                              const char* question_text, char** out_json) {
    if (!bank || !key || !legend_json || !out_json) return bad_argument("bank/key/legend_json/out_json");
    return guarded([&] {
        const auto lg = legend::parse_legend_json(parse_json_arg(legend_json, "legend"));
        const auto truth =
            qa::extract_answer(bank->bank, key, game_arg(lg.game.c_str()), lg, question_text ? question_text : "");
        *out_json = dup_string(qa::to_json(truth).dump());
    });
}

sd_status sd_parse_answer(const char* text, const char* answer_kind, const char* instruction, const char* preprompt,
                          const char* vocabulary_json, char** out_json) {
    if (!text || !answer_kind || !instruction || !preprompt || !out_json)
        return bad_argument("text/answer_kind/instruction/preprompt/out_json");
    return guarded([&] {
        auto kind = qa::answer_kind_from_string(answer_kind);
        if (!kind) fail_validation(std::string("unknown answer kind '") + answer_kind + "'");
        std::vector<std::string> vocab;
        if (vocabulary_json) vocab = string_list(parse_json_arg(vocabulary_json, "vocabulary"), "vocabulary");
        const auto parsed =
            vlm::parse_answer(text, *kind, instruction_arg(instruction), preprompt_arg(preprompt), vocab);
        *out_json = dup_string(vlm::to_json(parsed).dump());
    });
}

sd_status sd_pipeline_generate(const char* spec_path, const char* out_dir, const char* options_json, char** out_json) {
    if (!spec_path || !out_dir) return bad_argument("spec_path/out_dir");
    return guarded([&] {
        const Json options = parse_options(options_json);
        pipeline::GenerateOptions opts;
        qa::QuestionBank bank;
        opts.bank = bank_option(options, bank);
        if (options.contains("seed")) opts.seed = options["seed"].get<std::uint64_t>();
        if (options.contains("max_new_scenes")) opts.max_new_scenes = options["max_new_scenes"].get<std::size_t>();
        const auto r = pipeline::run_generate_file(spec_path, out_dir, opts);
        if (out_json)
            *out_json = dup_string(Json{{"total", r.total},
                                        {"rendered", r.rendered},
                                        {"skipped", r.skipped},
                                        {"complete", r.complete},
                                        {"spec_hash", r.manifest.value("spec_hash", "")}}
                                       .dump(2));
    });
}

sd_status sd_pipeline_evaluate(const char* dataset_dir, const char* endpoint_path, const char* options_json,
                               char** out_json, int* out_exit_code) {
    if (!dataset_dir || !endpoint_path) return bad_argument("dataset_dir/endpoint_path");
    return guarded([&] {
        const Json options = parse_options(options_json);
        pipeline::EvaluateOptions opts;
        qa::QuestionBank bank;
        opts.bank = bank_option(options, bank);
        if (options.contains("preprompts")) {
            opts.preprompts.clear();
            for (const auto& p : string_list(options["preprompts"], "preprompts")) opts.preprompts.push_back(preprompt_arg(p));
        }
        if (options.contains("instructions")) {
            opts.instructions.clear();
            for (const auto& i : string_list(options["instructions"], "instructions"))
                opts.instructions.push_back(instruction_arg(i));
        }
        opts.keys = string_list(options.value("keys", Json()), "keys");
        opts.live = options.value("live", false);
        const auto endpoint = vlm::load_endpoint_file(endpoint_path);
        const auto r = pipeline::run_evaluate(dataset_dir, endpoint, opts);
        if (out_exit_code) *out_exit_code = r.exit_code;
        if (out_json)
            *out_json = dup_string(Json{{"items", r.items},
                                        {"succeeded", r.succeeded},
                                        {"failed", r.failed},
                                        {"reused", r.reused},
                                        {"unparsed", r.unparsed},
                                        {"usage", vlm::to_json(r.usage)},
                                        {"exit_code", r.exit_code}}
                                       .dump(2));
    });
}

sd_status sd_pipeline_diagnose(const char* dataset_dir, const char* options_json, char** out_json) {
    if (!dataset_dir) return bad_argument("dataset_dir");
    return guarded([&] {
        const Json options = parse_options(options_json);
        diag::ReportConfig config;
        config.by = string_list(options.value("by", Json()), "by");
        if (options.contains("cross")) {
            for (const auto& pair : options["cross"]) {
                const auto names = string_list(pair, "cross");
                if (names.size() != 2) fail_validation("cross: expected pairs of variable names");
                config.cross.emplace_back(names[0], names[1]);
            }
        }
        if (options.contains("cross_metric")) {
            const auto name = options["cross_metric"].get<std::string>();
            auto m = diag::metric_from_string(name);
            if (!m) fail_validation("cross_metric: unknown metric '" + name + "'");
            config.cross_metric = *m;
        }
        if (options.contains("bands")) {
            const auto text = options["bands"].get<std::string>();
            if (text != "default") config.bands = diag::parse_bands(text);
            config.band_path = config.by.empty() ? "truth" : config.by.front();
        }
        if (options.contains("band_path")) config.band_path = options["band_path"].get<std::string>();
        if (options.contains("correlate")) {
            const auto path = options["correlate"].get<std::string>();
            config.correlate_with = parse_json_arg(read_text_file(path).c_str(), path.c_str());
        }
        const auto r = pipeline::run_diagnose(dataset_dir, config);
        if (out_json) *out_json = dup_string(r.report.dump(2));
    });
}

}  // extern "C"
