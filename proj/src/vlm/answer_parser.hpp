#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/json_util.hpp"
#include "qa/question_bank.hpp"

namespace scenediag::vlm {

enum class ParsedKind { integer, label, label_list, unparsed };

std::string_view to_string(ParsedKind kind);

struct ParsedAnswer {
    ParsedKind kind = ParsedKind::unparsed;
    long long integer = 0;
    std::string label;
    /// Sorted and unique.
    std::vector<std::string> labels;
    /// Rules applied, e.g. "cot_braces+last_integer".
    std::string rule;

    bool parsed() const { return kind != ParsedKind::unparsed; }

    friend bool operator==(const ParsedAnswer&, const ParsedAnswer&) = default;
};

Json to_json(const ParsedAnswer& a);
ParsedAnswer parsed_answer_from_json(const Json& j);

/// "zero".."twenty" -> 0..20.
std::optional<int> word_number(std::string_view word);

/// Rule ladder: the last `{answer : X}` under CoT preprompts, the text after
/// the final ':' for declarative instructions, then the last standalone
/// integer or the vocabulary labels found in what remains. Card codes match
/// case-sensitively, other labels case-insensitively.
ParsedAnswer parse_answer(std::string_view text, qa::AnswerKind expected, qa::InstructionKind instruction,
                          qa::PrepromptKind preprompt, const std::vector<std::string>& vocabulary = {});

}  // namespace scenediag::vlm
