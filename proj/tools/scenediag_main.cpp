#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "scenediag/scenediag.h"

namespace {

using Json = nlohmann::ordered_json;

struct OwnedString {
    char* p = nullptr;
    ~OwnedString() { sd_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

int report_failure(sd_status status) {
    std::cerr << "error: " << sd_last_error() << "\n";
    return sd_exit_code(status);
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void print_warning(const char* message, void*) { std::cerr << "warning: " << message << "\n"; }

int cmd_generate(const std::string& spec, const std::string& out, std::optional<std::uint64_t> seed,
                 std::optional<std::size_t> max_new, const std::string& bank) {
    Json options = Json::object();
    if (seed) options["seed"] = *seed;
    if (max_new) options["max_new_scenes"] = *max_new;
    if (!bank.empty()) options["bank"] = bank;
    OwnedString result;
    const sd_status st = sd_pipeline_generate(spec.c_str(), out.c_str(), options.dump().c_str(), &result.p);
    if (st != SD_OK) return report_failure(st);
    std::cout << result.str() << "\n";
    return 0;
}

int cmd_evaluate(const std::string& dataset, const std::string& endpoint, const std::string& preprompts,
                 const std::string& instructions, const std::string& keys, bool live, const std::string& bank) {
    Json options{{"preprompts", split_commas(preprompts)},
                 {"instructions", split_commas(instructions)},
                 {"keys", split_commas(keys)},
                 {"live", live}};
    if (!bank.empty()) options["bank"] = bank;
    OwnedString result;
    int exit_code = 0;
    const sd_status st =
        sd_pipeline_evaluate(dataset.c_str(), endpoint.c_str(), options.dump().c_str(), &result.p, &exit_code);
    if (st != SD_OK) return report_failure(st);
    std::cout << result.str() << "\n";
    if (exit_code != 0) std::cerr << "warning: some requests failed; coverage is partial\n";
    return exit_code;
}

int cmd_diagnose(const std::string& dataset, const std::vector<std::string>& by, const std::vector<std::string>& cross,
                 const std::string& cross_metric, const std::string& bands, const std::string& band_path,
                 const std::string& correlate) {
    Json options{{"by", by}};
    Json pairs = Json::array();
    for (const auto& c : cross) {
        const auto names = split_commas(c);
        if (names.size() != 2) {
            std::cerr << "error: --cross expects varX,varY\n";
            return 1;
        }
        pairs.push_back(names);
    }
    options["cross"] = pairs;
    if (!cross_metric.empty()) options["cross_metric"] = cross_metric;
    if (!bands.empty()) options["bands"] = bands;
    if (!band_path.empty()) options["band_path"] = band_path;
    if (!correlate.empty()) options["correlate"] = correlate;
    OwnedString report;
    const sd_status st = sd_pipeline_diagnose(dataset.c_str(), options.dump().c_str(), &report.p);
    if (st != SD_OK) return report_failure(st);
    const Json j = Json::parse(report.str());
    Json summary{{"overall", j.value("overall", Json())}};
    if (j.contains("tasks")) summary["tasks"] = j["tasks"];
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_expand(const std::string& spec) {
    sd_dataset* ds = nullptr;
    sd_status st = sd_dataset_load(spec.c_str(), &ds);
    if (st != SD_OK) return report_failure(st);
    OwnedString manifest;
    st = sd_dataset_expand(ds, &manifest.p);
    sd_dataset_free(ds);
    if (st != SD_OK) return report_failure(st);
    std::cout << manifest.str() << "\n";
    return 0;
}

int cmd_validate(const std::string& spec) {
    sd_dataset* ds = nullptr;
    sd_status st = sd_dataset_load(spec.c_str(), &ds);
    if (st != SD_OK) return report_failure(st);
    std::size_t count = 0;
    st = sd_dataset_count(ds, &count);
    int invalid = 0;
    for (std::size_t i = 0; st == SD_OK && i < count; ++i) {
        sd_scene* scene = nullptr;
        st = sd_dataset_scene(ds, i, &scene);
        if (st != SD_OK) break;
        OwnedString violations;
        st = sd_scene_validate(scene, &violations.p);
        sd_scene_free(scene);
        if (st != SD_OK) break;
        const Json v = Json::parse(violations.str());
        for (const auto& msg : v) std::cerr << "scene " << i << ": " << msg.get<std::string>() << "\n";
        if (!v.empty()) ++invalid;
    }
    sd_dataset_free(ds);
    if (st != SD_OK) return report_failure(st);
    std::cout << count << " scenes, " << invalid << " invalid\n";
    return invalid ? 2 : 0;
}

int cmd_render(const std::string& scene_path, const std::string& out, const std::string& legend_path) {
    std::FILE* f = std::fopen(scene_path.c_str(), "rb");
    if (!f) {
        std::cerr << "error: cannot open " << scene_path << "\n";
        return 4;
    }
    std::string text;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, n);
    std::fclose(f);
    sd_scene* scene = nullptr;
    sd_status st = sd_scene_import(text.c_str(), &scene);
    if (st != SD_OK) return report_failure(st);
    st = sd_scene_write_png(scene, out.c_str());
    if (st == SD_OK && !legend_path.empty()) {
        OwnedString legend;
        st = sd_scene_legend_json(scene, &legend.p);
        if (st == SD_OK) {
            std::FILE* lf = std::fopen(legend_path.c_str(), "wb");
            if (!lf) {
                sd_scene_free(scene);
                std::cerr << "error: cannot write " << legend_path << "\n";
                return 4;
            }
            const std::string body = legend.str() + "\n";
            std::fwrite(body.data(), 1, body.size(), lf);
            std::fclose(lf);
        }
    }
    sd_scene_free(scene);
    if (st != SD_OK) return report_failure(st);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic chess and poker scenes for diagnosing vision-language models"};
    app.set_version_flag("--version", std::string(sd_version()));
    app.require_subcommand(1);
    sd_set_warning_callback(print_warning, nullptr);

    std::string spec, out, dataset, endpoint, bank;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> max_new;
    auto* gen = app.add_subcommand("generate", "Render a dataset from a spec");
    gen->add_option("--spec", spec, "Dataset spec (YAML or JSON)")->required();
    gen->add_option("--out", out, "Output directory")->required();
    gen->add_option("--seed", seed, "Override the dataset seed");
    gen->add_option("--max-scenes", max_new, "Stop after rendering this many new scenes");
    gen->add_option("--bank", bank, "Question bank file");

    std::string preprompts = "debiased", instructions = "declarative", keys;
    bool live = false;
    auto* eval = app.add_subcommand("evaluate", "Query a model on a generated dataset");
    eval->add_option("--dataset", dataset, "Dataset directory")->required();
    eval->add_option("--endpoint", endpoint, "Endpoint file")->required();
    eval->add_option("--preprompts", preprompts, "Comma-separated preprompts")->capture_default_str();
    eval->add_option("--instructions", instructions, "Comma-separated instructions")->capture_default_str();
    eval->add_option("--keys", keys, "Comma-separated question keys (default: the dataset's QA keys)");
    eval->add_flag("--live", live, "Allow requests to a real endpoint");
    eval->add_option("--bank", bank, "Question bank file");

    std::vector<std::string> by, cross;
    std::string cross_metric, bands, band_path, correlate;
    auto* diag = app.add_subcommand("diagnose", "Compute metrics and reports from scored records");
    diag->add_option("--dataset", dataset, "Dataset directory")->required();
    diag->add_option("--by", by, "Variable for level curves (repeatable)")->delimiter(',');
    diag->add_option("--cross", cross, "Heatmap variables varX,varY (repeatable)");
    diag->add_option("--cross-metric", cross_metric, "accuracy, mae, mse, nmae or unparsed_rate");
    diag->add_option("--bands", bands, "Band table, 'default' or Name:lo-hi,...");
    diag->add_option("--band-path", band_path, "Variable binned by the band table");
    diag->add_option("--correlate", correlate, "Another report.json to correlate level curves with");

    auto* val = app.add_subcommand("validate", "Check a spec and every scene it expands to");
    val->add_option("--spec", spec, "Dataset spec")->required();

    auto* exp = app.add_subcommand("expand", "Print the expansion manifest of a spec");
    exp->add_option("--spec", spec, "Dataset spec")->required();

    std::string scene_path, legend_path;
    auto* ren = app.add_subcommand("render", "Render an exported scene spec to PNG");
    ren->add_option("--scene", scene_path, "Scene spec JSON")->required();
    ren->add_option("--out", out, "Output PNG")->required();
    ren->add_option("--legend", legend_path, "Also write the JSON legend here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (*gen) return cmd_generate(spec, out, seed, max_new, bank);
    if (*eval) return cmd_evaluate(dataset, endpoint, preprompts, instructions, keys, live, bank);
    if (*diag) return cmd_diagnose(dataset, by, cross, cross_metric, bands, band_path, correlate);
    if (*val) return cmd_validate(spec);
    if (*exp) return cmd_expand(spec);
    if (*ren) return cmd_render(scene_path, out, legend_path);
    return 1;
}
