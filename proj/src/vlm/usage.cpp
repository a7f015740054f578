#include "vlm/usage.hpp"

namespace scenediag::vlm {

UsageSummary accumulate_usage(const std::vector<ChatExchange>& exchanges, double price_in, double price_out) {
    UsageSummary u;
    u.exchanges = exchanges.size();
    for (const auto& x : exchanges) {
        if (!x.ok) continue;
        ++u.successful;
        u.input_tokens += x.input_tokens;
        u.output_tokens += x.output_tokens;
        u.total_latency_s += x.latency_s;
        if (x.usage_estimated) ++u.estimated;
    }
    if (u.successful > 0) {
        const auto n = static_cast<double>(u.successful);
        u.mean_input_tokens = static_cast<double>(u.input_tokens) / n;
        u.mean_output_tokens = static_cast<double>(u.output_tokens) / n;
        u.mean_latency_s = u.total_latency_s / n;
    }
    u.cost = (static_cast<double>(u.input_tokens) * price_in + static_cast<double>(u.output_tokens) * price_out) / 1e6;
    return u;
}

Json to_json(const UsageSummary& u) {
    return Json{{"exchanges", u.exchanges},
                {"successful", u.successful},
                {"input_tokens", u.input_tokens},
                {"output_tokens", u.output_tokens},
                {"mean_input_tokens", u.mean_input_tokens},
                {"mean_output_tokens", u.mean_output_tokens},
                {"total_latency_s", u.total_latency_s},
                {"mean_latency_s", u.mean_latency_s},
                {"cost", u.cost},
                {"estimated_usage", u.estimated}};
}

}  // namespace scenediag::vlm
