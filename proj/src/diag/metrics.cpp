#include "diag/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

namespace scenediag::diag {

namespace {

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
    return out;
}

std::set<std::string> lowered_set(const std::vector<std::string>& v) {
    std::set<std::string> out;
    for (const auto& s : v) out.insert(lower(s));
    return out;
}

}  // namespace

Json to_json(const EvalRecord& r) {
    Json j{{"scene_index", r.scene_index},
           {"image", r.image},
           {"question_key", r.question_key},
           {"game", r.game},
           {"assignments", r.assignments},
           {"preprompt", r.preprompt},
           {"instruction", r.instruction},
           {"truth", qa::to_json(r.truth)},
           {"answer", vlm::to_json(r.answer)},
           {"correct", r.correct},
           {"abs_error", r.abs_error ? Json(*r.abs_error) : Json()},
           {"norm_error", r.norm_error ? Json(*r.norm_error) : Json()},
           {"unparsed", r.unparsed}};
    if (!r.exchange_id.empty()) j["exchange_id"] = r.exchange_id;
    return j;
}

EvalRecord eval_record_from_json(const Json& j) {
    EvalRecord r;
    r.scene_index = get_or<std::size_t>(j, "scene_index", 0, "record");
    r.image = get_or<std::string>(j, "image", "", "record");
    r.question_key = get_or<std::string>(j, "question_key", "", "record");
    r.game = get_or<std::string>(j, "game", "", "record");
    r.assignments = j.value("assignments", Json::object());
    r.preprompt = get_or<std::string>(j, "preprompt", "neutral", "record");
    r.instruction = get_or<std::string>(j, "instruction", "direct", "record");
    r.truth = qa::ground_truth_from_json(j.at("truth"));
    r.answer = vlm::parsed_answer_from_json(j.at("answer"));
    r.correct = get_or<bool>(j, "correct", false, "record");
    if (auto it = j.find("abs_error"); it != j.end() && it->is_number()) r.abs_error = it->get<double>();
    if (auto it = j.find("norm_error"); it != j.end() && it->is_number()) r.norm_error = it->get<double>();
    r.unparsed = get_or<bool>(j, "unparsed", false, "record");
    r.exchange_id = get_or<std::string>(j, "exchange_id", "", "record");
    return r;
}

Score score_answer(const qa::GroundTruth& t, const vlm::ParsedAnswer& a) {
    Score s;
    s.unparsed = !a.parsed();
    switch (t.kind) {
        case qa::AnswerKind::integer: {
            const double target = static_cast<double>(t.integer);
            double err = std::abs(target);
            if (a.kind == vlm::ParsedKind::integer) {
                err = std::abs(static_cast<double>(a.integer) - target);
                s.correct = a.integer == t.integer;
            }
            s.abs_error = err;
            s.norm_error = t.integer != 0 ? err / std::abs(target) : err;
            break;
        }
        case qa::AnswerKind::label:
            s.correct = a.kind == vlm::ParsedKind::label && lower(a.label) == lower(t.label);
            break;
        case qa::AnswerKind::label_list:
            s.correct = a.kind == vlm::ParsedKind::label_list && lowered_set(a.labels) == lowered_set(t.labels);
            break;
    }
    return s;
}

void score_record(EvalRecord& r) {
    const Score s = score_answer(r.truth, r.answer);
    r.correct = s.correct;
    r.abs_error = s.abs_error;
    r.norm_error = s.norm_error;
    r.unparsed = s.unparsed;
}

int l_loc(GridCell t, GridCell p) { return std::abs(t.row - p.row) + std::abs(t.col - p.col); }

std::string truth_key(const qa::GroundTruth& t) {
    switch (t.kind) {
        case qa::AnswerKind::integer: return std::to_string(t.integer);
        case qa::AnswerKind::label: return lower(t.label);
        case qa::AnswerKind::label_list: {
            auto s = lowered_set(t.labels);
            return join({s.begin(), s.end()});
        }
    }
    return "";
}

std::string answer_key(const vlm::ParsedAnswer& a) {
    switch (a.kind) {
        case vlm::ParsedKind::integer: return std::to_string(a.integer);
        case vlm::ParsedKind::label: return lower(a.label);
        case vlm::ParsedKind::label_list: {
            auto s = lowered_set(a.labels);
            return join({s.begin(), s.end()});
        }
        case vlm::ParsedKind::unparsed: return "<unparsed>";
    }
    return "";
}

Json to_json(const MetricSuite& s) {
    auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(); };
    return Json{{"n", s.n},
                {"n_numeric", s.n_numeric},
                {"accuracy", s.accuracy},
                {"precision", opt(s.precision)},
                {"recall", opt(s.recall)},
                {"f1", opt(s.f1)},
                {"mae", s.n_numeric ? Json(s.mae) : Json()},
                {"mse", s.n_numeric ? Json(s.mse) : Json()},
                {"nmae", s.n_numeric ? Json(s.nmae) : Json()},
                {"unparsed_rate", s.unparsed_rate}};
}

MetricSuite compute_suite(const std::vector<const EvalRecord*>& records) {
    if (records.empty()) fail_validation("metrics: empty record set");
    MetricSuite s;
    s.n = records.size();
    double correct = 0, abs_sum = 0, sq_sum = 0, norm_sum = 0, unparsed = 0;
    std::set<std::string> classes;
    for (const EvalRecord* r : records) {
        if (r->correct) correct += 1;
        if (r->unparsed) unparsed += 1;
        if (r->abs_error) {
            ++s.n_numeric;
            abs_sum += *r->abs_error;
            sq_sum += *r->abs_error * *r->abs_error;
            norm_sum += r->norm_error.value_or(0.0);
        }
        classes.insert(truth_key(r->truth));
    }
    const auto n = static_cast<double>(s.n);
    s.accuracy = correct / n;
    s.unparsed_rate = unparsed / n;
    if (s.n_numeric) {
        const auto m = static_cast<double>(s.n_numeric);
        s.mae = abs_sum / m;
        s.mse = sq_sum / m;
        s.nmae = norm_sum / m;
    }
    double p_sum = 0, r_sum = 0, f_sum = 0;
    for (const auto& c : classes) {
        double tp = 0, fp = 0, fn = 0;
        for (const EvalRecord* r : records) {
            const bool is_t = truth_key(r->truth) == c;
            const bool is_p = r->correct ? is_t : answer_key(r->answer) == c;
            if (is_t && is_p) tp += 1;
            else if (is_p) fp += 1;
            else if (is_t) fn += 1;
        }
        const double p = tp + fp > 0 ? tp / (tp + fp) : 0.0;
        const double rc = tp + fn > 0 ? tp / (tp + fn) : 0.0;
        p_sum += p;
        r_sum += rc;
        f_sum += p + rc > 0 ? 2 * p * rc / (p + rc) : 0.0;
    }
    const auto k = static_cast<double>(classes.size());
    s.precision = p_sum / k;
    s.recall = r_sum / k;
    s.f1 = f_sum / k;
    return s;
}

MetricSuite compute_suite(const std::vector<EvalRecord>& records) {
    std::vector<const EvalRecord*> ptrs;
    ptrs.reserve(records.size());
    for (const auto& r : records) ptrs.push_back(&r);
    return compute_suite(ptrs);
}

MetricSuite merge_suites(const MetricSuite& a, const MetricSuite& b) {
    MetricSuite m;
    m.n = a.n + b.n;
    m.n_numeric = a.n_numeric + b.n_numeric;
    auto weighted = [](double x, std::size_t nx, double y, std::size_t ny) {
        const std::size_t n = nx + ny;
        return n ? (x * static_cast<double>(nx) + y * static_cast<double>(ny)) / static_cast<double>(n) : 0.0;
    };
    m.accuracy = weighted(a.accuracy, a.n, b.accuracy, b.n);
    m.unparsed_rate = weighted(a.unparsed_rate, a.n, b.unparsed_rate, b.n);
    m.mae = weighted(a.mae, a.n_numeric, b.mae, b.n_numeric);
    m.mse = weighted(a.mse, a.n_numeric, b.mse, b.n_numeric);
    m.nmae = weighted(a.nmae, a.n_numeric, b.nmae, b.n_numeric);
    return m;
}

}  // namespace scenediag::diag
