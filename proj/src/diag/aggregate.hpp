#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diag/metrics.hpp"

namespace scenediag::diag {

/// Level of a record for a variable path. Besides assignment paths, the
/// names question_key, preprompt, instruction, game and truth are accepted.
/// Throws a validation error when the record carries no such variable.
Json level_of(const EvalRecord& r, const std::string& path);

struct MeanStd {
    double mean = 0;
    double std = 0;  // population
};

Json to_json(const MeanStd& m);

struct LevelAggregate {
    std::string path;
    Json level;
    std::size_t n = 0;
    MeanStd accuracy;
    std::optional<MeanStd> abs_error;
    std::optional<MeanStd> sq_error;
    std::optional<MeanStd> norm_error;
    /// Mean integer prediction over parsed integer answers.
    std::optional<double> mean_prediction;
    MetricSuite suite;
    std::vector<std::size_t> records;  // indices into the input
};

Json to_json(const LevelAggregate& a);

/// One aggregate per distinct level. Numeric levels sort numerically and come
/// before text levels, which keep their order of first appearance.
std::vector<LevelAggregate> aggregate_by_level(const std::vector<EvalRecord>& records, const std::string& path);

struct Band {
    std::string name;
    long long lo = 0;
    long long hi = 0;
};

/// Low 1-4, Medium 5-9, High 10-21.
std::vector<Band> default_bands();
/// Parses "Low:1-4,Medium:5-9,High:10-21".
std::vector<Band> parse_bands(const std::string& text);

struct BandRow {
    Band band;
    std::size_t n = 0;
    std::size_t n_levels = 0;
    double accuracy_mean = 0;
    /// Population std of per-record correctness within the band.
    double accuracy_std_samples = 0;
    /// Population std of the per-level accuracies within the band.
    double accuracy_std_levels = 0;
    std::optional<double> mae;
};

struct BandTable {
    std::string path;
    std::vector<BandRow> rows;
    /// Records whose level falls in no band.
    std::vector<std::size_t> orphans;
};

Json to_json(const BandTable& t);

BandTable band_table(const std::vector<EvalRecord>& records, const std::string& path, const std::vector<Band>& bands);

enum class Metric { accuracy, mae, mse, nmae, unparsed_rate };

std::string_view to_string(Metric m);
std::optional<Metric> metric_from_string(std::string_view name);
/// Metric of a suite; empty for error metrics on non-numeric records.
std::optional<double> metric_value(const MetricSuite& s, Metric m);

struct HeatmapGrid {
    std::string x_path;
    std::string y_path;
    Metric metric = Metric::accuracy;
    std::vector<Json> x_levels;
    std::vector<Json> y_levels;
    /// values[y][x]; empty cells have no value and count 0.
    std::vector<std::vector<std::optional<double>>> values;
    std::vector<std::vector<std::size_t>> counts;
};

Json to_json(const HeatmapGrid& g);

HeatmapGrid cross_grid(const std::vector<EvalRecord>& records, const std::string& x_path, const std::string& y_path,
                       Metric metric);

}  // namespace scenediag::diag
