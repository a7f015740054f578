#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <thread>

#include "common/errors.hpp"
#include "support/temp_dir.hpp"
#include "vlm/answer_parser.hpp"
#include "vlm/client.hpp"
#include "vlm/usage.hpp"

using namespace scenediag;
using namespace scenediag::vlm;
using qa::AnswerKind;
using qa::InstructionKind;
using qa::PrepromptKind;

namespace {

class FakeServer {
public:
    explicit FakeServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
        server_.Post(".*", [this, handler](const httplib::Request& req, httplib::Response& res) {
            ++hits_;
            last_body_ = req.body;
            last_auth_ = req.get_header_value("Authorization");
            handler(req, res);
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeServer() {
        server_.stop();
        thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    int hits() const { return hits_; }
    std::string last_body() const { return last_body_; }
    std::string last_auth() const { return last_auth_; }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    std::atomic<int> hits_{0};
    std::string last_body_;
    std::string last_auth_;
};

std::string openai_reply(const std::string& text, int in = 0, int out = 0) {
    Json j{{"choices", Json::array({Json{{"message", {{"role", "assistant"}, {"content", text}}}}})}};
    if (in > 0) j["usage"] = Json{{"prompt_tokens", in}, {"completion_tokens", out}};
    return j.dump();
}

EndpointSpec local_endpoint(const std::string& url, Flavor flavor = Flavor::openai_chat) {
    EndpointSpec e;
    e.flavor = flavor;
    e.base_url = url;
    e.model = "test-model";
    e.timeout_s = 5;
    e.max_retries = 3;
    e.backoff_base_s = 0.25;
    return e;
}

ParsedAnswer parse_int(std::string_view text, InstructionKind in = InstructionKind::declarative,
                       PrepromptKind pp = PrepromptKind::neutral) {
    return parse_answer(text, AnswerKind::integer, in, pp);
}

}  // namespace

TEST_CASE("declarative and cot answers") {
    const auto a = parse_int("The number of pieces in the image is: 10");
    CHECK(a.kind == ParsedKind::integer);
    CHECK(a.integer == 10);
    CHECK(parse_int("Let me count... 3 rows, 2 more. {answer : 4}", InstructionKind::direct, PrepromptKind::cot).integer ==
          4);
    CHECK(parse_int("{answer : 2} then {answer : 6}", InstructionKind::direct, PrepromptKind::debiased_cot).integer ==
          6);
    CHECK(parse_int("The column on which the piece is on the board is: 3").integer == 3);
    const auto color = parse_answer("The color of the piece on the board is: white", AnswerKind::label,
                                    InstructionKind::declarative, PrepromptKind::neutral, {"white", "black"});
    CHECK(color.kind == ParsedKind::label);
    CHECK(color.label == "white");
}

TEST_CASE("last integer wins and word numbers are read") {
    CHECK(parse_int("Of the 8 rows, I count 5 pieces", InstructionKind::direct).integer == 5);
    CHECK(parse_int("There are five pieces.", InstructionKind::missing_word).integer == 5);
    CHECK(parse_int("Twenty", InstructionKind::direct).integer == 20);
    CHECK(word_number("zero") == 0);
    CHECK(word_number("Twelve") == 12);
    CHECK_FALSE(word_number("twentyone").has_value());
    CHECK_FALSE(word_number("many").has_value());
}

TEST_CASE("unparseable text is flagged") {
    const auto a = parse_int("I cannot tell from this picture.", InstructionKind::direct);
    CHECK(a.kind == ParsedKind::unparsed);
    CHECK_FALSE(a.parsed());
    const auto b = parse_answer("It is a dragon", AnswerKind::label, InstructionKind::direct, PrepromptKind::neutral,
                                {"king", "queen"});
    CHECK_FALSE(b.parsed());
    CHECK(parsed_answer_from_json(Json::parse(to_json(a).dump())) == a);
}

TEST_CASE("label lists and card codes") {
    const std::vector<std::string> cards{"AS", "10H", "KD", "2C"};
    const auto a = parse_answer("The cards in the image are: KD, AS and 10H", AnswerKind::label_list,
                                InstructionKind::declarative, PrepromptKind::neutral, cards);
    CHECK(a.kind == ParsedKind::label_list);
    CHECK(a.labels == std::vector<std::string>{"10H", "AS", "KD"});
    const auto types = parse_answer("I see a King and two pawns", AnswerKind::label_list, InstructionKind::direct,
                                    PrepromptKind::neutral, {"pawn", "king", "queen"});
    CHECK(types.labels == std::vector<std::string>{"king", "pawn"});
}

TEST_CASE("mock endpoints answer offline") {
    EndpointSpec oracle;
    oracle.flavor = Flavor::mock_oracle;
    ChatRequest r{"s0", "How many?", {1, 2, 3}, "image/png", "The number of pieces in the image is: 7"};
    const auto x = query_model(oracle, r);
    CHECK(x.ok);
    CHECK(x.response_text == "The number of pieces in the image is: 7");
    CHECK(x.image_bytes == 3);

    EndpointSpec constant;
    constant.flavor = Flavor::mock_constant;
    CHECK(query_model(constant, r).response_text == "3");

    EndpointSpec scripted;
    scripted.flavor = Flavor::mock_scripted;
    scripted.script = {{"s0", "two"}, {"*", "none"}};
    CHECK(query_model(scripted, r).response_text == "two");
    r.id = "other";
    CHECK(query_model(scripted, r).response_text == "none");
}

TEST_CASE("endpoint files") {
    const auto e = load_endpoint_file(testing::data_path("endpoints/openai.json"));
    CHECK(e.flavor == Flavor::openai_chat);
    CHECK(e.token_env == "OPENAI_API_KEY");
    CHECK(parse_endpoint(Json::parse(to_json(e).dump())).base_url == e.base_url);
    CHECK_THROWS_AS(parse_endpoint(Json::parse(R"({"flavor": "telepathy"})")), Error);
    CHECK_THROWS_AS(parse_endpoint(Json::parse(R"({"flavor": "openai_chat"})")), Error);
    CHECK_THROWS_AS(parse_endpoint(Json::parse(R"({"flavor": "mock_oracle", "max_concurrency": 0})")), Error);
    CHECK_THROWS_AS(parse_endpoint(Json::parse(R"({"flavor": "mock_oracle", "timeout_s": 0})")), Error);

    testing::TempDir dir("endpoint");
    testing::spit(dir.file("script.json"), R"({"a": "1", "*": "2"})");
    testing::spit(dir.file("ep.json"), R"({"flavor": "mock_scripted", "script_file": "script.json"})");
    const auto s = load_endpoint_file(dir.file("ep.json"));
    CHECK(s.script.at("a") == "1");
    CHECK(s.script.at("*") == "2");
}

TEST_CASE("request bodies") {
    auto e = local_endpoint("http://localhost:1");
    const ChatRequest r{"id", "Count.", {'a', 'b', 'c'}, "image/png", ""};
    const Json chat = request_body(e, r);
    CHECK(chat["model"] == "test-model");
    CHECK(chat["temperature"] == 0);
    CHECK(chat["messages"][0]["content"][0]["text"] == "Count.");
    CHECK(chat["messages"][0]["content"][1]["image_url"]["url"] == "data:image/png;base64,YWJj");
    e.flavor = Flavor::ollama_generate;
    const Json gen = request_body(e, r);
    CHECK(gen["images"][0] == "YWJj");
    CHECK(gen["stream"] == false);
    CHECK(gen["options"]["temperature"] == 0);
}

TEST_CASE("backoff grows and is capped") {
    EndpointSpec e;
    e.backoff_base_s = 0.5;
    e.backoff_max_s = 3.0;
    for (int attempt = 1; attempt <= 6; ++attempt) {
        const double d = backoff_delay(e, attempt, 9);
        const double floor = std::min(3.0, 0.5 * std::pow(2.0, attempt - 1));
        CHECK(d >= floor);
        CHECK(d < floor + 0.5);
        CHECK(d == backoff_delay(e, attempt, 9));
    }
}

TEST_CASE("token estimate") {
    CHECK(estimate_tokens("") == 0);
    CHECK(estimate_tokens("abcd") == 1);
    CHECK(estimate_tokens("abcde") == 2);
}

TEST_CASE("transient failures are retried") {
    std::atomic<int> calls{0};
    FakeServer server([&](const httplib::Request&, httplib::Response& res) {
        if (calls++ == 0) {
            res.status = 429;
            res.set_content("slow down", "text/plain");
        } else {
            res.set_content(openai_reply("The number of pieces in the image is: 7", 1003, 12), "application/json");
        }
    });
    std::vector<double> delays;
    QueryOptions opts;
    opts.sleep = [&](double d) { delays.push_back(d); };
    const auto e = local_endpoint(server.url());
    const auto x = query_model(e, {"r1", "How many?", {1, 2}, "image/png", ""}, opts);
    CHECK(x.ok);
    CHECK(x.attempts == 2);
    CHECK(x.status == 200);
    CHECK(x.input_tokens == 1003);
    CHECK(x.output_tokens == 12);
    CHECK_FALSE(x.usage_estimated);
    REQUIRE(delays.size() == 1);
    CHECK(delays[0] >= e.backoff_base_s);
    CHECK(Json::parse(server.last_body())["model"] == "test-model");
}

TEST_CASE("server errors exhaust the retry budget") {
    FakeServer server([](const httplib::Request&, httplib::Response& res) { res.status = 503; });
    std::vector<double> delays;
    QueryOptions opts;
    opts.sleep = [&](double d) { delays.push_back(d); };
    auto e = local_endpoint(server.url());
    e.max_retries = 2;
    const auto x = query_model(e, {"r", "q", {}, "image/png", ""}, opts);
    CHECK_FALSE(x.ok);
    CHECK(x.attempts == 3);
    CHECK(server.hits() == 3);
    CHECK(delays.size() == 2);
    CHECK(x.error.rfind("HTTP 503", 0) == 0);
}

TEST_CASE("permanent failures are not retried") {
    FakeServer server([](const httplib::Request&, httplib::Response& res) {
        res.status = 400;
        res.set_content("bad image", "text/plain");
    });
    QueryOptions opts;
    opts.sleep = [](double) {};
    const auto x = query_model(local_endpoint(server.url()), {"r", "q", {}, "image/png", ""}, opts);
    CHECK_FALSE(x.ok);
    CHECK(x.attempts == 1);
    CHECK(x.status == 400);
    CHECK(x.error.find("bad image") != std::string::npos);
}

TEST_CASE("ollama replies and bearer tokens") {
    FakeServer server([](const httplib::Request& req, httplib::Response& res) {
        CHECK(req.path == "/api/generate");
        res.set_content(R"({"response": "There are 4 pieces", "prompt_eval_count": 50, "eval_count": 5})",
                        "application/json");
    });
    auto e = local_endpoint(server.url(), Flavor::ollama_generate);
    e.token_env = "SCENEDIAG_TEST_TOKEN";
    ::unsetenv("SCENEDIAG_TEST_TOKEN");
    try {
        query_model(e, {"r", "q", {}, "image/png", ""});
        FAIL("expected a configuration error");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::config);
    }
    ::setenv("SCENEDIAG_TEST_TOKEN", "sekret", 1);
    const auto x = query_model(e, {"r", "q", {}, "image/png", ""});
    ::unsetenv("SCENEDIAG_TEST_TOKEN");
    CHECK(x.ok);
    CHECK(x.response_text == "There are 4 pieces");
    CHECK(x.input_tokens == 50);
    CHECK(server.last_auth() == "Bearer sekret");
}

TEST_CASE("missing usage falls back to estimates") {
    FakeServer server([](const httplib::Request&, httplib::Response& res) {
        res.set_content(openai_reply("12345678"), "application/json");
    });
    const auto x = query_model(local_endpoint(server.url()), {"r", "abcdefgh", {}, "image/png", ""});
    CHECK(x.ok);
    CHECK(x.usage_estimated);
    CHECK(x.input_tokens == 2);
    CHECK(x.output_tokens == 2);
}

TEST_CASE("batches keep request order under concurrency") {
    std::atomic<int> in_flight{0}, peak{0};
    FakeServer server([&](const httplib::Request& req, httplib::Response& res) {
        const int now = ++in_flight;
        int p = peak.load();
        while (now > p && !peak.compare_exchange_weak(p, now)) {
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        const Json body = Json::parse(req.body);
        res.set_content(openai_reply(body["messages"][0]["content"][0]["text"].get<std::string>()), "application/json");
        --in_flight;
    });
    auto e = local_endpoint(server.url());
    e.max_concurrency = 3;
    std::vector<ChatRequest> reqs;
    for (int i = 0; i < 12; ++i) reqs.push_back({"r" + std::to_string(i), "prompt " + std::to_string(i), {}, "image/png", ""});
    const auto out = query_batch(e, reqs);
    REQUIRE(out.size() == 12);
    for (int i = 0; i < 12; ++i) {
        CHECK(out[i].id == "r" + std::to_string(i));
        CHECK(out[i].response_text == "prompt " + std::to_string(i));
    }
    CHECK(peak.load() <= 3);
}

TEST_CASE("usage accumulation") {
    CHECK(accumulate_usage({}, 2, 8) == UsageSummary{});
    std::vector<ChatExchange> xs(2);
    for (auto& x : xs) {
        x.ok = true;
        x.input_tokens = 1000;
        x.output_tokens = 10;
    }
    const auto u = accumulate_usage(xs, 2.0, 8.0);
    CHECK(u.input_tokens == 2000);
    CHECK(u.cost == doctest::Approx(0.00416).epsilon(1e-12));

    std::vector<ChatExchange> many(210);
    for (std::size_t i = 0; i < many.size(); ++i) {
        many[i].ok = true;
        many[i].input_tokens = 1003;
    }
    const auto big = accumulate_usage(many, 0, 0);
    CHECK(big.input_tokens == 210630);
    CHECK(big.mean_input_tokens == 1003.0);

    xs[1].ok = false;
    CHECK(accumulate_usage(xs, 0, 0).successful == 1);
    CHECK(exchange_from_json(Json::parse(to_json(xs[0]).dump())).input_tokens == 1000);
}
