#include "vlm/client.hpp"

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <thread>

#include "common/rng.hpp"

namespace scenediag::vlm {

namespace {

constexpr std::pair<Flavor, std::string_view> kFlavors[] = {
    {Flavor::openai_chat, "openai_chat"},     {Flavor::ollama_generate, "ollama_generate"},
    {Flavor::mock_oracle, "mock_oracle"},     {Flavor::mock_constant, "mock_constant"},
    {Flavor::mock_scripted, "mock_scripted"},
};

struct Url {
    std::string origin;  // scheme://host[:port]
    std::string prefix;  // path without trailing '/'
};

Url split_url(const std::string& base) {
    const std::size_t scheme = base.find("://");
    if (scheme == std::string::npos) fail_validation("endpoint.base_url: expected scheme://host[:port][/path]");
    const std::size_t slash = base.find('/', scheme + 3);
    Url u;
    u.origin = slash == std::string::npos ? base : base.substr(0, slash);
    u.prefix = slash == std::string::npos ? "" : base.substr(slash);
    while (!u.prefix.empty() && u.prefix.back() == '/') u.prefix.pop_back();
    return u;
}

std::string excerpt(const std::string& body) { return body.size() > 200 ? body.substr(0, 200) + "..." : body; }

bool transient(int status) { return status == 429 || status >= 500; }

void fill_usage(ChatExchange& x, const Json& resp, Flavor flavor) {
    bool have = false;
    if (flavor == Flavor::openai_chat) {
        if (auto u = resp.find("usage"); u != resp.end() && u->is_object()) {
            x.input_tokens = u->value("prompt_tokens", 0LL);
            x.output_tokens = u->value("completion_tokens", 0LL);
            have = u->contains("prompt_tokens");
        }
    } else if (resp.contains("prompt_eval_count")) {
        x.input_tokens = resp.value("prompt_eval_count", 0LL);
        x.output_tokens = resp.value("eval_count", 0LL);
        have = true;
    }
    if (!have) {
        x.input_tokens = estimate_tokens(x.prompt);
        x.output_tokens = estimate_tokens(x.response_text);
        x.usage_estimated = true;
    }
}

std::string response_text(const Json& resp, Flavor flavor) {
    if (flavor == Flavor::openai_chat) {
        const Json& choices = resp.at("choices");
        const Json& content = choices.at(0).at("message").at("content");
        if (content.is_string()) return content.get<std::string>();
        std::string out;
        for (const auto& part : content)
            if (part.value("type", "") == "text") out += part.value("text", "");
        return out;
    }
    return resp.at("response").get<std::string>();
}

ChatExchange mock_exchange(const EndpointSpec& e, const ChatRequest& r) {
    ChatExchange x;
    x.id = r.id;
    x.prompt = r.prompt;
    x.media_type = r.media_type;
    x.image_bytes = r.image.size();
    x.attempts = 1;
    x.ok = true;
    x.status = 200;
    switch (e.flavor) {
        case Flavor::mock_oracle: x.response_text = r.oracle_text; break;
        case Flavor::mock_constant: x.response_text = e.constant_response; break;
        case Flavor::mock_scripted: {
            auto it = e.script.find(r.id);
            if (it == e.script.end()) it = e.script.find("*");
            x.response_text = it == e.script.end() ? "" : it->second;
            break;
        }
        default: break;
    }
    x.input_tokens = estimate_tokens(x.prompt);
    x.output_tokens = estimate_tokens(x.response_text);
    x.usage_estimated = true;
    return x;
}

}  // namespace

std::string_view to_string(Flavor flavor) {
    for (const auto& [f, name] : kFlavors)
        if (f == flavor) return name;
    return "?";
}

std::optional<Flavor> flavor_from_string(std::string_view name) {
    for (const auto& [f, text] : kFlavors)
        if (text == name) return f;
    return std::nullopt;
}

bool is_mock(Flavor flavor) {
    return flavor == Flavor::mock_oracle || flavor == Flavor::mock_constant || flavor == Flavor::mock_scripted;
}

EndpointSpec parse_endpoint(const Json& j) {
    if (!j.is_object()) fail_validation("endpoint: expected a mapping");
    EndpointSpec e;
    e.name = get_or<std::string>(j, "name", e.name, "endpoint");
    const std::string flavor = get_or<std::string>(j, "flavor", "mock_oracle", "endpoint");
    auto f = flavor_from_string(flavor);
    if (!f) fail_validation("endpoint.flavor: unknown flavor '" + flavor + "'");
    e.flavor = *f;
    e.base_url = get_or<std::string>(j, "base_url", "", "endpoint");
    e.model = get_or<std::string>(j, "model", "", "endpoint");
    e.token_env = get_or<std::string>(j, "token_env", "", "endpoint");
    e.timeout_s = get_or<double>(j, "timeout_s", e.timeout_s, "endpoint");
    e.max_retries = get_or<int>(j, "max_retries", e.max_retries, "endpoint");
    e.max_concurrency = get_or<int>(j, "max_concurrency", e.max_concurrency, "endpoint");
    e.price_in_per_million = get_or<double>(j, "price_in_per_million", 0.0, "endpoint");
    e.price_out_per_million = get_or<double>(j, "price_out_per_million", 0.0, "endpoint");
    e.backoff_base_s = get_or<double>(j, "backoff_base_s", e.backoff_base_s, "endpoint");
    e.backoff_max_s = get_or<double>(j, "backoff_max_s", e.backoff_max_s, "endpoint");
    e.constant_response = get_or<std::string>(j, "constant_response", e.constant_response, "endpoint");
    if (auto s = j.find("script"); s != j.end()) {
        if (!s->is_object()) fail_validation("endpoint.script: expected a mapping of request id -> response");
        for (auto it = s->begin(); it != s->end(); ++it) e.script[it.key()] = it->get<std::string>();
    }
    if (!(e.timeout_s > 0)) fail_validation("endpoint.timeout_s: must be positive");
    if (e.max_concurrency < 1) fail_validation("endpoint.max_concurrency: must be at least 1");
    if (e.max_retries < 0) fail_validation("endpoint.max_retries: must be >= 0");
    if (e.backoff_base_s < 0) fail_validation("endpoint.backoff_base_s: must be >= 0");
    if (!is_mock(e.flavor) && e.base_url.empty()) fail_validation("endpoint.base_url: required for " + flavor);
    if (!is_mock(e.flavor)) split_url(e.base_url);
    return e;
}

EndpointSpec load_endpoint_file(const std::string& path) {
    Json j = parse_structured_text(read_text_file(path));
    if (j.is_object() && j.contains("script_file")) {
        std::filesystem::path p = j["script_file"].get<std::string>();
        if (p.is_relative()) p = std::filesystem::path(path).parent_path() / p;
        Json script = parse_structured_text(read_text_file(p.string()));
        Json merged = j.value("script", Json::object());
        for (auto it = script.begin(); it != script.end(); ++it) merged[it.key()] = *it;
        j["script"] = merged;
    }
    return parse_endpoint(j);
}

Json to_json(const EndpointSpec& e) {
    Json j{{"name", e.name},
           {"flavor", std::string(to_string(e.flavor))},
           {"base_url", e.base_url},
           {"model", e.model},
           {"token_env", e.token_env},
           {"timeout_s", e.timeout_s},
           {"max_retries", e.max_retries},
           {"max_concurrency", e.max_concurrency},
           {"price_in_per_million", e.price_in_per_million},
           {"price_out_per_million", e.price_out_per_million},
           {"backoff_base_s", e.backoff_base_s},
           {"backoff_max_s", e.backoff_max_s}};
    if (e.flavor == Flavor::mock_constant) j["constant_response"] = e.constant_response;
    if (!e.script.empty()) {
        Json s = Json::object();
        for (const auto& [k, v] : e.script) s[k] = v;
        j["script"] = std::move(s);
    }
    return j;
}

Json to_json(const ChatExchange& x) {
    Json j{{"id", x.id},
           {"ok", x.ok},
           {"status", x.status},
           {"attempts", x.attempts},
           {"prompt", x.prompt},
           {"media_type", x.media_type},
           {"image_bytes", x.image_bytes},
           {"response", x.response_text},
           {"input_tokens", x.input_tokens},
           {"output_tokens", x.output_tokens},
           {"usage_estimated", x.usage_estimated},
           {"latency_s", x.latency_s}};
    if (!x.error.empty()) j["error"] = x.error;
    return j;
}

ChatExchange exchange_from_json(const Json& j) {
    ChatExchange x;
    x.id = get_or<std::string>(j, "id", "", "exchange");
    x.ok = get_or<bool>(j, "ok", false, "exchange");
    x.status = get_or<int>(j, "status", 0, "exchange");
    x.attempts = get_or<int>(j, "attempts", 0, "exchange");
    x.prompt = get_or<std::string>(j, "prompt", "", "exchange");
    x.media_type = get_or<std::string>(j, "media_type", "", "exchange");
    x.image_bytes = get_or<std::size_t>(j, "image_bytes", 0, "exchange");
    x.response_text = get_or<std::string>(j, "response", "", "exchange");
    x.input_tokens = get_or<long long>(j, "input_tokens", 0, "exchange");
    x.output_tokens = get_or<long long>(j, "output_tokens", 0, "exchange");
    x.usage_estimated = get_or<bool>(j, "usage_estimated", false, "exchange");
    x.latency_s = get_or<double>(j, "latency_s", 0.0, "exchange");
    x.error = get_or<std::string>(j, "error", "", "exchange");
    return x;
}

double backoff_delay(const EndpointSpec& e, int attempt, std::uint64_t jitter_seed) {
    const double exp = e.backoff_base_s * std::pow(2.0, std::max(0, attempt - 1));
    Rng rng(derive_seed(jitter_seed, static_cast<std::uint64_t>(attempt)));
    return std::min(e.backoff_max_s, exp) + e.backoff_base_s * rng.uniform01();
}

long long estimate_tokens(std::string_view text) { return static_cast<long long>((text.size() + 3) / 4); }

Json request_body(const EndpointSpec& e, const ChatRequest& r) {
    const std::string b64 = httplib::detail::base64_encode(std::string(r.image.begin(), r.image.end()));
    if (e.flavor == Flavor::ollama_generate)
        return Json{{"model", e.model},
                    {"prompt", r.prompt},
                    {"images", Json::array({b64})},
                    {"stream", false},
                    {"options", {{"temperature", 0}}}};
    Json content = Json::array();
    content.push_back(Json{{"type", "text"}, {"text", r.prompt}});
    content.push_back(
        Json{{"type", "image_url"}, {"image_url", {{"url", "data:" + r.media_type + ";base64," + b64}}}});
    return Json{{"model", e.model},
                {"temperature", 0},
                {"messages", Json::array({Json{{"role", "user"}, {"content", std::move(content)}}})}};
}

ChatExchange query_model(const EndpointSpec& e, const ChatRequest& r, const QueryOptions& options) {
    if (is_mock(e.flavor)) return mock_exchange(e, r);

    httplib::Headers headers;
    if (!e.token_env.empty()) {
        const char* token = std::getenv(e.token_env.c_str());
        if (!token || !*token)
            throw Error(ErrorKind::config, "endpoint " + e.name + ": environment variable " + e.token_env + " is not set");
        headers.emplace("Authorization", std::string("Bearer ") + token);
    }
    const Url url = split_url(e.base_url);
    const std::string path = url.prefix + (e.flavor == Flavor::openai_chat ? "/chat/completions" : "/api/generate");
    const std::string body = request_body(e, r).dump();

    httplib::Client client(url.origin);
    const auto secs = static_cast<time_t>(e.timeout_s);
    const auto usecs = static_cast<time_t>((e.timeout_s - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    ChatExchange x;
    x.id = r.id;
    x.prompt = r.prompt;
    x.media_type = r.media_type;
    x.image_bytes = r.image.size();
    const std::uint64_t jitter_seed = options.jitter_seed ^ fnv1a64(r.id);
    const auto start = std::chrono::steady_clock::now();
    for (int attempt = 1; attempt <= e.max_retries + 1; ++attempt) {
        x.attempts = attempt;
        auto res = client.Post(path, headers, body, "application/json");
        bool retry = false;
        if (!res) {
            x.status = 0;
            x.error = "transport error: " + httplib::to_string(res.error());
            retry = true;
        } else if (res->status >= 200 && res->status < 300) {
            x.status = res->status;
            try {
                const Json resp = Json::parse(res->body);
                x.response_text = response_text(resp, e.flavor);
                fill_usage(x, resp, e.flavor);
                x.ok = true;
                x.error.clear();
            } catch (const std::exception& ex) {
                x.error = std::string("malformed response: ") + ex.what() + ": " + excerpt(res->body);
            }
            break;
        } else {
            x.status = res->status;
            x.error = "HTTP " + std::to_string(res->status) + ": " + excerpt(res->body);
            retry = transient(res->status);
        }
        if (!retry || attempt == e.max_retries + 1) break;
        const double delay = backoff_delay(e, attempt, jitter_seed);
        if (options.sleep) options.sleep(delay);
        else std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
    x.latency_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return x;
}

std::vector<ChatExchange> query_batch(const EndpointSpec& e, const std::vector<ChatRequest>& requests,
                                      const QueryOptions& options) {
    std::vector<ChatExchange> out(requests.size());
    if (requests.empty()) return out;
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr failure;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= requests.size()) return;
            try {
                out[i] = query_model(e, requests[i], options);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!failure) failure = std::current_exception();
                next = requests.size();
            }
        }
    };
    const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(e.max_concurrency), requests.size());
    if (n <= 1 || is_mock(e.flavor)) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace scenediag::vlm
