#include "vlm/answer_parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>

namespace scenediag::vlm {

namespace {

constexpr std::array<std::string_view, 21> kWords{
    "zero",  "one",    "two",    "three",    "four",     "five",    "six",
    "seven", "eight",  "nine",   "ten",      "eleven",   "twelve",  "thirteen",
    "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty"};

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct Token {
    std::string text;
    std::size_t pos;
};

/// Maximal runs of letters, digits and '_', plus a leading '-' kept with digits.
std::vector<Token> tokens(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!is_word_char(s[i])) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < s.size() && is_word_char(s[i])) ++i;
        out.push_back({std::string(s.substr(start, i - start)), start});
    }
    return out;
}

std::optional<long long> last_integer(std::string_view s) {
    std::optional<long long> found;
    for (const auto& t : tokens(s)) {
        const bool digits = std::all_of(t.text.begin(), t.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
        if (digits && t.text.size() <= 18) {
            // A decimal like "3.5" is not a standalone integer.
            const bool dotted_before = t.pos >= 2 && s[t.pos - 1] == '.' && std::isdigit(static_cast<unsigned char>(s[t.pos - 2]));
            const std::size_t end = t.pos + t.text.size();
            const bool dotted_after = end + 1 < s.size() && s[end] == '.' && std::isdigit(static_cast<unsigned char>(s[end + 1]));
            if (dotted_before || dotted_after) continue;
            long long v = std::stoll(t.text);
            if (t.pos >= 1 && s[t.pos - 1] == '-') v = -v;
            found = v;
        } else if (auto w = word_number(lower(t.text))) {
            found = *w;
        }
    }
    return found;
}

bool is_card_vocabulary(const std::string& label) {
    return !label.empty() && std::isupper(static_cast<unsigned char>(label.back())) &&
           (std::isdigit(static_cast<unsigned char>(label.front())) || std::isupper(static_cast<unsigned char>(label.front())));
}

/// Vocabulary hits in order of appearance, as (position, label).
std::vector<std::pair<std::size_t, std::string>> label_hits(std::string_view s, const std::vector<std::string>& vocab) {
    std::vector<std::pair<std::size_t, std::string>> hits;
    const std::string low = lower(s);
    for (const auto& label : vocab) {
        if (label.empty()) continue;
        const bool exact = is_card_vocabulary(label) && label.size() <= 3;
        const std::string needle = exact ? label : lower(label);
        const std::string& hay = exact ? std::string(s) : low;
        std::size_t from = 0;
        while (true) {
            const std::size_t p = hay.find(needle, from);
            if (p == std::string::npos) break;
            const std::size_t e = p + needle.size();
            const bool left = p == 0 || !is_word_char(hay[p - 1]);
            bool right = e >= hay.size() || !is_word_char(hay[e]);
            // Plural forms: "kings", "pawns".
            if (!right && !exact && hay[e] == 's' && (e + 1 >= hay.size() || !is_word_char(hay[e + 1]))) right = true;
            if (left && right) hits.emplace_back(p, label);
            from = p + 1;
        }
    }
    std::sort(hits.begin(), hits.end());
    return hits;
}

}  // namespace

std::string_view to_string(ParsedKind kind) {
    switch (kind) {
        case ParsedKind::integer: return "integer";
        case ParsedKind::label: return "label";
        case ParsedKind::label_list: return "label_list";
        case ParsedKind::unparsed: return "unparsed";
    }
    return "?";
}

Json to_json(const ParsedAnswer& a) {
    Json j{{"kind", std::string(to_string(a.kind))}};
    switch (a.kind) {
        case ParsedKind::integer: j["value"] = a.integer; break;
        case ParsedKind::label: j["value"] = a.label; break;
        case ParsedKind::label_list: j["value"] = a.labels; break;
        case ParsedKind::unparsed: j["value"] = nullptr; break;
    }
    j["rule"] = a.rule;
    return j;
}

ParsedAnswer parsed_answer_from_json(const Json& j) {
    ParsedAnswer a;
    const std::string kind = get_or<std::string>(j, "kind", "unparsed", "answer");
    const Json v = j.value("value", Json());
    if (kind == "integer") {
        a.kind = ParsedKind::integer;
        a.integer = v.get<long long>();
    } else if (kind == "label") {
        a.kind = ParsedKind::label;
        a.label = v.get<std::string>();
    } else if (kind == "label_list") {
        a.kind = ParsedKind::label_list;
        a.labels = v.get<std::vector<std::string>>();
    } else if (kind != "unparsed") {
        fail_validation("answer.kind: unknown kind '" + kind + "'");
    }
    a.rule = get_or<std::string>(j, "rule", "", "answer");
    return a;
}

std::optional<int> word_number(std::string_view word) {
    const std::string w = lower(word);
    for (std::size_t i = 0; i < kWords.size(); ++i)
        if (kWords[i] == w) return static_cast<int>(i);
    return std::nullopt;
}

ParsedAnswer parse_answer(std::string_view text, qa::AnswerKind expected, qa::InstructionKind instruction,
                          qa::PrepromptKind preprompt, const std::vector<std::string>& vocabulary) {
    std::string rest(text);
    std::string rule;
    if (qa::uses_cot(preprompt)) {
        static const std::regex re(R"(\{\s*answer\s*:\s*([^{}]*)\})", std::regex::icase);
        std::string last;
        bool found = false;
        for (std::sregex_iterator it(rest.begin(), rest.end(), re), end; it != end; ++it) {
            last = (*it)[1].str();
            found = true;
        }
        if (found) {
            rest = last;
            rule = "cot_braces";
        }
    }
    if (rule.empty() && instruction == qa::InstructionKind::declarative) {
        const std::size_t colon = rest.rfind(':');
        if (colon != std::string::npos) {
            rest = rest.substr(colon + 1);
            rule = "after_colon";
        }
    }
    auto with = [&](std::string_view step) { return rule.empty() ? std::string(step) : rule + "+" + std::string(step); };

    ParsedAnswer a;
    if (expected == qa::AnswerKind::integer) {
        if (auto v = last_integer(rest)) {
            a.kind = ParsedKind::integer;
            a.integer = *v;
            a.rule = with("last_integer");
            return a;
        }
    } else {
        auto hits = label_hits(rest, vocabulary);
        if (!hits.empty()) {
            if (expected == qa::AnswerKind::label) {
                a.kind = ParsedKind::label;
                a.label = hits.back().second;
                a.rule = with("vocabulary");
            } else {
                a.kind = ParsedKind::label_list;
                for (auto& h : hits) a.labels.push_back(h.second);
                std::sort(a.labels.begin(), a.labels.end());
                a.labels.erase(std::unique(a.labels.begin(), a.labels.end()), a.labels.end());
                a.rule = with("vocabulary_list");
            }
            return a;
        }
    }
    a.rule = with("unmatched");
    return a;
}

}  // namespace scenediag::vlm
