#include "diag/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace scenediag::diag {

Json to_json(const CorrelationReport& r) {
    return Json{{"n", r.n},
                {"series_a", r.a},
                {"series_b", r.b},
                {"pearson", r.pearson ? Json(*r.pearson) : Json()},
                {"spearman", r.spearman ? Json(*r.spearman) : Json()},
                {"defined", r.defined()}};
}

std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    if (n < 2 || b.size() != n) return std::nullopt;
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(n);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0 || sbb == 0) return std::nullopt;
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::vector<double> fractional_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return v[i] < v[j]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

CorrelationReport correlate(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) fail_validation("correlate: series lengths differ");
    if (a.size() < 2) fail_validation("correlate: need at least two paired values");
    CorrelationReport r;
    r.a = a;
    r.b = b;
    r.n = a.size();
    r.pearson = pearson(a, b);
    r.spearman = pearson(fractional_ranks(a), fractional_ranks(b));
    return r;
}

}  // namespace scenediag::diag
