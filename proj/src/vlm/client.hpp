#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/json_util.hpp"

namespace scenediag::vlm {

enum class Flavor { openai_chat, ollama_generate, mock_oracle, mock_constant, mock_scripted };

std::string_view to_string(Flavor flavor);
std::optional<Flavor> flavor_from_string(std::string_view name);
bool is_mock(Flavor flavor);

struct EndpointSpec {
    std::string name = "endpoint";
    std::string base_url;
    Flavor flavor = Flavor::mock_oracle;
    std::string model;
    /// Environment variable holding the bearer token; empty sends no auth header.
    std::string token_env;
    double timeout_s = 60.0;
    int max_retries = 3;
    int max_concurrency = 1;
    double price_in_per_million = 0.0;
    double price_out_per_million = 0.0;
    double backoff_base_s = 0.5;
    double backoff_max_s = 30.0;
    std::string constant_response = "3";
    /// mock_scripted: request id -> response; "*" is the fallback.
    std::map<std::string, std::string> script;
};

EndpointSpec parse_endpoint(const Json& j);
/// A `script_file` member is read relative to the endpoint file.
EndpointSpec load_endpoint_file(const std::string& path);
Json to_json(const EndpointSpec& e);

struct ChatRequest {
    std::string id;
    std::string prompt;
    std::vector<std::uint8_t> image;
    std::string media_type = "image/png";
    /// Perfect answer, echoed by mock_oracle.
    std::string oracle_text;
};

struct ChatExchange {
    std::string id;
    std::string prompt;
    std::string media_type;
    std::size_t image_bytes = 0;
    std::string response_text;
    long long input_tokens = 0;
    long long output_tokens = 0;
    bool usage_estimated = false;
    double latency_s = 0.0;
    int attempts = 0;
    bool ok = false;
    int status = 0;
    std::string error;
};

Json to_json(const ChatExchange& x);
ChatExchange exchange_from_json(const Json& j);

struct QueryOptions {
    /// Replaces the real sleep between retries (tests record the delays).
    std::function<void(double)> sleep;
    std::uint64_t jitter_seed = 0;
};

/// Delay before retry `attempt` (1-based): base * 2^(attempt-1) capped at the
/// maximum, plus uniform jitter in [0, base).
double backoff_delay(const EndpointSpec& e, int attempt, std::uint64_t jitter_seed);

/// Token count estimate used when the provider reports no usage.
long long estimate_tokens(std::string_view text);

/// Sends one request with temperature 0. Transient failures (connection
/// errors, timeouts, 429, 5xx) are retried up to max_retries; a permanent
/// failure yields an exchange with ok = false and the status and body
/// excerpt in `error`. A missing token raises a configuration error.
ChatExchange query_model(const EndpointSpec& e, const ChatRequest& request, const QueryOptions& options = {});

/// Runs requests with at most max_concurrency in flight; results keep request order.
std::vector<ChatExchange> query_batch(const EndpointSpec& e, const std::vector<ChatRequest>& requests,
                                      const QueryOptions& options = {});

/// JSON body sent for a request (exposed for tests).
Json request_body(const EndpointSpec& e, const ChatRequest& request);

}  // namespace scenediag::vlm
