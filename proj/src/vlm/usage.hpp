#pragma once

#include <cstddef>
#include <vector>

#include "common/json_util.hpp"
#include "vlm/client.hpp"

namespace scenediag::vlm {

struct UsageSummary {
    std::size_t exchanges = 0;
    std::size_t successful = 0;
    long long input_tokens = 0;
    long long output_tokens = 0;
    double mean_input_tokens = 0;
    double mean_output_tokens = 0;
    double total_latency_s = 0;
    double mean_latency_s = 0;
    double cost = 0;
    std::size_t estimated = 0;

    friend bool operator==(const UsageSummary&, const UsageSummary&) = default;
};

/// Totals over successful exchanges; cost = (in * price_in + out * price_out) / 1e6.
UsageSummary accumulate_usage(const std::vector<ChatExchange>& exchanges, double price_in_per_million,
                              double price_out_per_million);

Json to_json(const UsageSummary& u);

}  // namespace scenediag::vlm
