#pragma once

#include <optional>
#include <vector>

#include "common/json_util.hpp"

namespace scenediag::diag {

struct CorrelationReport {
    std::vector<double> a;
    std::vector<double> b;
    std::size_t n = 0;
    /// Empty when a series has zero variance.
    std::optional<double> pearson;
    std::optional<double> spearman;
    bool defined() const { return pearson.has_value() && spearman.has_value(); }
};

Json to_json(const CorrelationReport& r);

std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b);
/// 1-based ranks; ties share the mean of their positions.
std::vector<double> fractional_ranks(const std::vector<double>& v);

/// Pearson on values and on fractional ranks. Requires equal lengths >= 2.
CorrelationReport correlate(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace scenediag::diag
