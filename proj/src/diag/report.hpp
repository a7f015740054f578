#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diag/aggregate.hpp"
#include "diag/correlation.hpp"
#include "diag/metrics.hpp"

namespace scenediag::diag {

struct ReportConfig {
    /// Variables for level curves.
    std::vector<std::string> by;
    std::vector<std::pair<std::string, std::string>> cross;
    Metric cross_metric = Metric::accuracy;
    /// Integer variable for the band table; empty skips it.
    std::string band_path;
    std::vector<Band> bands = default_bands();
    /// Another report.json whose level curves are correlated with this one.
    std::optional<Json> correlate_with;
};

/// Mean L_LOC over (scene, preprompt, instruction) groups that have both a
/// row and a column answer for the same single-target localization task.
std::optional<MeanStd> localization_distance(const std::vector<EvalRecord>& records);

Json build_report(const std::vector<EvalRecord>& records, const ReportConfig& config);

/// Flat export: overall, per task and per level rows.
std::string report_csv(const Json& report);

/// Plot data files, name -> CSV text: level_curves, error_histogram, confusion.
std::map<std::string, std::string> plot_csvs(const std::vector<EvalRecord>& records, const Json& report);

}  // namespace scenediag::diag
