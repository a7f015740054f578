#include "diag/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace scenediag::diag {

namespace {

MeanStd mean_std(const std::vector<double>& v) {
    MeanStd m;
    if (v.empty()) return m;
    double sum = 0;
    for (double x : v) sum += x;
    m.mean = sum / static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(v.size()));
    return m;
}

/// Distinct levels in report order together with the records at each.
std::vector<std::pair<Json, std::vector<std::size_t>>> group_levels(const std::vector<EvalRecord>& records,
                                                                    const std::string& path) {
    std::vector<std::pair<Json, std::vector<std::size_t>>> groups;
    for (std::size_t i = 0; i < records.size(); ++i) {
        Json level = level_of(records[i], path);
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == level; });
        if (it == groups.end()) groups.push_back({std::move(level), {i}});
        else it->second.push_back(i);
    }
    std::stable_sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
        const bool an = a.first.is_number(), bn = b.first.is_number();
        if (an && bn) return a.first.template get<double>() < b.first.template get<double>();
        return an && !bn;
    });
    return groups;
}

std::vector<const EvalRecord*> pick(const std::vector<EvalRecord>& records, const std::vector<std::size_t>& idx) {
    std::vector<const EvalRecord*> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(&records[i]);
    return out;
}

}  // namespace

Json level_of(const EvalRecord& r, const std::string& path) {
    if (path == "question_key") return r.question_key;
    if (path == "preprompt") return r.preprompt;
    if (path == "instruction") return r.instruction;
    if (path == "game") return r.game;
    if (path == "truth") return qa::to_json(r.truth)["value"];
    if (auto it = r.assignments.find(path); it != r.assignments.end()) return *it;
    fail_validation("diagnostics: unknown variable '" + path + "'");
}

Json to_json(const MeanStd& m) { return Json{{"mean", m.mean}, {"std", m.std}}; }

Json to_json(const LevelAggregate& a) {
    auto opt = [](const std::optional<MeanStd>& m) { return m ? to_json(*m) : Json(); };
    return Json{{"level", a.level},
                {"n", a.n},
                {"accuracy", to_json(a.accuracy)},
                {"abs_error", opt(a.abs_error)},
                {"sq_error", opt(a.sq_error)},
                {"norm_error", opt(a.norm_error)},
                {"mean_prediction", a.mean_prediction ? Json(*a.mean_prediction) : Json()},
                {"suite", to_json(a.suite)}};
}

std::vector<LevelAggregate> aggregate_by_level(const std::vector<EvalRecord>& records, const std::string& path) {
    std::vector<LevelAggregate> out;
    for (auto& [level, idx] : group_levels(records, path)) {
        LevelAggregate a;
        a.path = path;
        a.level = level;
        a.n = idx.size();
        a.records = idx;
        std::vector<double> acc, abs, sq, norm, pred;
        for (auto i : idx) {
            const EvalRecord& r = records[i];
            acc.push_back(r.correct ? 1.0 : 0.0);
            if (r.abs_error) {
                abs.push_back(*r.abs_error);
                sq.push_back(*r.abs_error * *r.abs_error);
                norm.push_back(r.norm_error.value_or(0.0));
            }
            if (r.answer.kind == vlm::ParsedKind::integer) pred.push_back(static_cast<double>(r.answer.integer));
        }
        a.accuracy = mean_std(acc);
        if (!abs.empty()) {
            a.abs_error = mean_std(abs);
            a.sq_error = mean_std(sq);
            a.norm_error = mean_std(norm);
        }
        if (!pred.empty()) a.mean_prediction = mean_std(pred).mean;
        a.suite = compute_suite(pick(records, idx));
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<Band> default_bands() { return {{"Low", 1, 4}, {"Medium", 5, 9}, {"High", 10, 21}}; }

std::vector<Band> parse_bands(const std::string& text) {
    std::vector<Band> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        const auto dash = item.find('-', colon == std::string::npos ? 0 : colon + 1);
        if (colon == std::string::npos || dash == std::string::npos)
            fail_validation("bands: expected name:lo-hi, got '" + item + "'");
        Band b;
        b.name = item.substr(0, colon);
        try {
            b.lo = std::stoll(item.substr(colon + 1, dash - colon - 1));
            b.hi = std::stoll(item.substr(dash + 1));
        } catch (const std::exception&) {
            fail_validation("bands: bad bounds in '" + item + "'");
        }
        if (b.lo > b.hi) fail_validation("bands: lo > hi in '" + item + "'");
        out.push_back(b);
    }
    if (out.empty()) fail_validation("bands: empty band list");
    return out;
}

Json to_json(const BandTable& t) {
    Json rows = Json::array();
    for (const auto& r : t.rows)
        rows.push_back(Json{{"band", r.band.name},
                            {"range", Json::array({r.band.lo, r.band.hi})},
                            {"n", r.n},
                            {"n_levels", r.n_levels},
                            {"accuracy_mean", r.accuracy_mean},
                            {"accuracy_std_samples", r.accuracy_std_samples},
                            {"accuracy_std_levels", r.accuracy_std_levels},
                            {"mae", r.mae ? Json(*r.mae) : Json()}});
    return Json{{"variable", t.path}, {"rows", std::move(rows)}, {"orphans", t.orphans.size()}};
}

BandTable band_table(const std::vector<EvalRecord>& records, const std::string& path, const std::vector<Band>& bands) {
    BandTable t;
    t.path = path;
    std::vector<std::vector<std::size_t>> members(bands.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const Json level = level_of(records[i], path);
        if (!level.is_number_integer()) fail_validation("bands: variable '" + path + "' is not integer-valued");
        const long long v = level.get<long long>();
        bool placed = false;
        for (std::size_t b = 0; b < bands.size() && !placed; ++b)
            if (v >= bands[b].lo && v <= bands[b].hi) {
                members[b].push_back(i);
                placed = true;
            }
        if (!placed) t.orphans.push_back(i);
    }
    for (std::size_t b = 0; b < bands.size(); ++b) {
        BandRow row;
        row.band = bands[b];
        row.n = members[b].size();
        std::vector<double> acc, abs;
        std::map<long long, std::vector<double>> per_level;
        for (auto i : members[b]) {
            const double c = records[i].correct ? 1.0 : 0.0;
            acc.push_back(c);
            per_level[level_of(records[i], path).get<long long>()].push_back(c);
            if (records[i].abs_error) abs.push_back(*records[i].abs_error);
        }
        const MeanStd s = mean_std(acc);
        row.accuracy_mean = s.mean;
        row.accuracy_std_samples = s.std;
        std::vector<double> level_means;
        for (const auto& [lvl, v] : per_level) level_means.push_back(mean_std(v).mean);
        row.n_levels = level_means.size();
        row.accuracy_std_levels = mean_std(level_means).std;
        if (!abs.empty()) row.mae = mean_std(abs).mean;
        t.rows.push_back(row);
    }
    return t;
}

std::string_view to_string(Metric m) {
    switch (m) {
        case Metric::accuracy: return "accuracy";
        case Metric::mae: return "mae";
        case Metric::mse: return "mse";
        case Metric::nmae: return "nmae";
        case Metric::unparsed_rate: return "unparsed_rate";
    }
    return "?";
}

std::optional<Metric> metric_from_string(std::string_view name) {
    for (auto m : {Metric::accuracy, Metric::mae, Metric::mse, Metric::nmae, Metric::unparsed_rate})
        if (to_string(m) == name) return m;
    return std::nullopt;
}

std::optional<double> metric_value(const MetricSuite& s, Metric m) {
    switch (m) {
        case Metric::accuracy: return s.accuracy;
        case Metric::unparsed_rate: return s.unparsed_rate;
        case Metric::mae: return s.n_numeric ? std::optional(s.mae) : std::nullopt;
        case Metric::mse: return s.n_numeric ? std::optional(s.mse) : std::nullopt;
        case Metric::nmae: return s.n_numeric ? std::optional(s.nmae) : std::nullopt;
    }
    return std::nullopt;
}

Json to_json(const HeatmapGrid& g) {
    Json values = Json::array(), counts = Json::array();
    for (std::size_t y = 0; y < g.y_levels.size(); ++y) {
        Json vr = Json::array(), cr = Json::array();
        for (std::size_t x = 0; x < g.x_levels.size(); ++x) {
            vr.push_back(g.values[y][x] ? Json(*g.values[y][x]) : Json());
            cr.push_back(g.counts[y][x]);
        }
        values.push_back(std::move(vr));
        counts.push_back(std::move(cr));
    }
    return Json{{"x", g.x_path},
                {"y", g.y_path},
                {"metric", std::string(to_string(g.metric))},
                {"x_levels", g.x_levels},
                {"y_levels", g.y_levels},
                {"values", std::move(values)},
                {"counts", std::move(counts)}};
}

HeatmapGrid cross_grid(const std::vector<EvalRecord>& records, const std::string& x_path, const std::string& y_path,
                       Metric metric) {
    HeatmapGrid g;
    g.x_path = x_path;
    g.y_path = y_path;
    g.metric = metric;
    const auto xs = group_levels(records, x_path);
    const auto ys = group_levels(records, y_path);
    for (const auto& x : xs) g.x_levels.push_back(x.first);
    for (const auto& y : ys) g.y_levels.push_back(y.first);
    g.values.assign(ys.size(), std::vector<std::optional<double>>(xs.size()));
    g.counts.assign(ys.size(), std::vector<std::size_t>(xs.size(), 0));
    for (std::size_t yi = 0; yi < ys.size(); ++yi)
        for (std::size_t xi = 0; xi < xs.size(); ++xi) {
            std::vector<std::size_t> both;
            std::set_intersection(xs[xi].second.begin(), xs[xi].second.end(), ys[yi].second.begin(),
                                  ys[yi].second.end(), std::back_inserter(both));
            g.counts[yi][xi] = both.size();
            if (!both.empty()) g.values[yi][xi] = metric_value(compute_suite(pick(records, both)), metric);
        }
    return g;
}

}  // namespace scenediag::diag
