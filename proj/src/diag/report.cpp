#include "diag/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace scenediag::diag {

namespace {

const std::pair<const char*, const char*> kLocalizationPairs[] = {
    {"localize_row_one_piece", "localize_column_one_piece"},
    {"localize_row_card_grid", "localize_column_card_grid"},
};

std::string num(const Json& v) {
    if (v.is_null()) return "";
    if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10g", v.get<double>());
        return buf;
    }
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> task_keys(const std::vector<EvalRecord>& records) {
    std::vector<std::string> keys;
    for (const auto& r : records)
        if (std::find(keys.begin(), keys.end(), r.question_key) == keys.end()) keys.push_back(r.question_key);
    return keys;
}

std::vector<EvalRecord> subset(const std::vector<EvalRecord>& records, const std::string& key) {
    std::vector<EvalRecord> out;
    for (const auto& r : records)
        if (r.question_key == key) out.push_back(r);
    return out;
}

bool integer_valued(const std::vector<EvalRecord>& records, const std::string& path) {
    for (const auto& r : records)
        if (!level_of(r, path).is_number_integer()) return false;
    return true;
}

bool has_variable(const std::vector<EvalRecord>& records, const std::string& path) {
    try {
        for (const auto& r : records) level_of(r, path);
        return !records.empty();
    } catch (const Error&) {
        return false;
    }
}

/// Level -> (mean prediction or accuracy) from a report's level curve.
std::map<std::string, double> curve(const Json& levels) {
    std::map<std::string, double> out;
    for (const auto& l : levels) {
        const Json& mp = l.at("mean_prediction");
        out[l.at("level").dump()] = mp.is_number() ? mp.get<double>() : l.at("accuracy").at("mean").get<double>();
    }
    return out;
}

}  // namespace

std::optional<MeanStd> localization_distance(const std::vector<EvalRecord>& records) {
    std::vector<double> d;
    for (const auto& [row_key, col_key] : kLocalizationPairs) {
        using Group = std::tuple<std::size_t, std::string, std::string>;
        std::map<Group, std::pair<const EvalRecord*, const EvalRecord*>> groups;
        for (const auto& r : records) {
            const Group g{r.scene_index, r.preprompt, r.instruction};
            if (r.question_key == row_key) groups[g].first = &r;
            if (r.question_key == col_key) groups[g].second = &r;
        }
        for (const auto& [g, pair] : groups) {
            const auto [row, col] = pair;
            if (!row || !col) continue;
            // Unparsed coordinates count with error equal to the target, like MAE.
            d.push_back(row->abs_error.value_or(0.0) + col->abs_error.value_or(0.0));
        }
    }
    if (d.empty()) return std::nullopt;
    MeanStd m;
    double sum = 0;
    for (double x : d) sum += x;
    m.mean = sum / static_cast<double>(d.size());
    double ss = 0;
    for (double x : d) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(d.size()));
    return m;
}

Json build_report(const std::vector<EvalRecord>& records, const ReportConfig& config) {
    if (records.empty()) fail_validation("diagnose: no scored records");
    Json report = Json::object();
    report["records"] = records.size();
    report["overall"] = to_json(compute_suite(records));

    const auto keys = task_keys(records);
    Json tasks = Json::object();
    for (const auto& k : keys) tasks[k] = to_json(compute_suite(subset(records, k)));
    report["tasks"] = std::move(tasks);

    Json prompts = Json::object();
    for (const auto& k : keys)
        prompts[k] = to_json(cross_grid(subset(records, k), "instruction", "preprompt", Metric::accuracy));
    report["prompt_grids"] = std::move(prompts);

    if (auto loc = localization_distance(records)) report["l_loc"] = to_json(*loc);

    Json levels = Json::object();
    for (const auto& path : config.by) {
        Json per_task = Json::object();
        for (const auto& k : keys) {
            const auto sub = subset(records, k);
            if (!has_variable(sub, path)) continue;
            Json arr = Json::array();
            for (const auto& a : aggregate_by_level(sub, path)) arr.push_back(to_json(a));
            per_task[k] = std::move(arr);
        }
        if (per_task.empty()) fail_validation("diagnose: unknown variable '" + path + "'");
        levels[path] = std::move(per_task);
    }
    report["levels"] = std::move(levels);

    if (!config.band_path.empty()) {
        Json bands = Json::object();
        for (const auto& k : keys) {
            const auto sub = subset(records, k);
            if (has_variable(sub, config.band_path) && integer_valued(sub, config.band_path))
                bands[k] = to_json(band_table(sub, config.band_path, config.bands));
        }
        report["bands"] = std::move(bands);
    }

    Json grids = Json::array();
    for (const auto& [x, y] : config.cross)
        for (const auto& k : keys) {
            const auto sub = subset(records, k);
            if (!has_variable(sub, x) || !has_variable(sub, y)) continue;
            Json g = to_json(cross_grid(sub, x, y, config.cross_metric));
            g["question_key"] = k;
            grids.push_back(std::move(g));
        }
    report["grids"] = std::move(grids);

    if (config.correlate_with) {
        Json cors = Json::array();
        const Json& other = config.correlate_with->value("levels", Json::object());
        for (auto pit = report["levels"].begin(); pit != report["levels"].end(); ++pit) {
            if (!other.contains(pit.key())) continue;
            for (auto kit = pit->begin(); kit != pit->end(); ++kit) {
                if (!other[pit.key()].contains(kit.key())) continue;
                const auto mine = curve(*kit), theirs = curve(other[pit.key()][kit.key()]);
                std::vector<double> a, b;
                for (const auto& l : *kit) {
                    const std::string lv = l.at("level").dump();
                    if (auto it = theirs.find(lv); it != theirs.end()) {
                        a.push_back(mine.at(lv));
                        b.push_back(it->second);
                    }
                }
                if (a.size() < 2) continue;
                Json c = to_json(correlate(a, b));
                c["variable"] = pit.key();
                c["question_key"] = kit.key();
                cors.push_back(std::move(c));
            }
        }
        report["correlations"] = std::move(cors);
    }

    report["notes"] = Json{
        {"f1", "distinct truth values are classes; macro-averaged one-vs-rest"},
        {"nmae", "per-record |error|/target (|error| when the target is 0), then averaged"},
        {"unparsed", "unparsed answers count as incorrect with error equal to the target"},
        {"band_std", "accuracy_std_samples is across records, accuracy_std_levels across level means"}};
    return report;
}

std::string report_csv(const Json& report) {
    std::ostringstream out;
    out << "scope,question_key,variable,level,n,accuracy,precision,recall,f1,mae,mse,nmae,unparsed_rate\n";
    auto row = [&](const std::string& scope, const std::string& key, const std::string& var, const std::string& level,
                   const Json& s) {
        out << scope << ',' << csv_field(key) << ',' << csv_field(var) << ',' << csv_field(level) << ','
            << num(s.at("n")) << ',' << num(s.at("accuracy")) << ',' << num(s.at("precision")) << ','
            << num(s.at("recall")) << ',' << num(s.at("f1")) << ',' << num(s.at("mae")) << ',' << num(s.at("mse"))
            << ',' << num(s.at("nmae")) << ',' << num(s.at("unparsed_rate")) << '\n';
    };
    row("overall", "", "", "", report.at("overall"));
    for (auto it = report.at("tasks").begin(); it != report.at("tasks").end(); ++it) row("task", it.key(), "", "", *it);
    for (auto pit = report.at("levels").begin(); pit != report.at("levels").end(); ++pit)
        for (auto kit = pit->begin(); kit != pit->end(); ++kit)
            for (const auto& l : *kit) row("level", kit.key(), pit.key(), num(l.at("level")), l.at("suite"));
    return out.str();
}

std::map<std::string, std::string> plot_csvs(const std::vector<EvalRecord>& records, const Json& report) {
    std::map<std::string, std::string> files;
    {
        std::ostringstream out;
        out << "variable,question_key,level,n,accuracy_mean,accuracy_std,abs_error_mean,abs_error_std,mean_prediction\n";
        for (auto pit = report.at("levels").begin(); pit != report.at("levels").end(); ++pit)
            for (auto kit = pit->begin(); kit != pit->end(); ++kit)
                for (const auto& l : *kit) {
                    const Json& ae = l.at("abs_error");
                    out << csv_field(pit.key()) << ',' << csv_field(kit.key()) << ',' << csv_field(num(l.at("level")))
                        << ',' << num(l.at("n")) << ',' << num(l.at("accuracy").at("mean")) << ','
                        << num(l.at("accuracy").at("std")) << ',' << (ae.is_null() ? "" : num(ae.at("mean"))) << ','
                        << (ae.is_null() ? "" : num(ae.at("std"))) << ',' << num(l.at("mean_prediction")) << '\n';
                }
        files["level_curves"] = out.str();
    }
    {
        std::map<std::pair<std::string, long long>, std::size_t> hist;
        for (const auto& r : records)
            if (r.truth.kind == qa::AnswerKind::integer && r.answer.kind == vlm::ParsedKind::integer)
                ++hist[{r.question_key, r.answer.integer - r.truth.integer}];
        std::ostringstream out;
        out << "question_key,signed_error,count\n";
        for (const auto& [k, n] : hist) out << csv_field(k.first) << ',' << k.second << ',' << n << '\n';
        files["error_histogram"] = out.str();
    }
    {
        std::map<std::tuple<std::string, std::string, std::string>, std::size_t> conf;
        for (const auto& r : records) ++conf[{r.question_key, truth_key(r.truth), answer_key(r.answer)}];
        std::ostringstream out;
        out << "question_key,truth,prediction,count\n";
        for (const auto& [k, n] : conf)
            out << csv_field(std::get<0>(k)) << ',' << csv_field(std::get<1>(k)) << ',' << csv_field(std::get<2>(k))
                << ',' << n << '\n';
        files["confusion"] = out.str();
    }
    return files;
}

}  // namespace scenediag::diag
