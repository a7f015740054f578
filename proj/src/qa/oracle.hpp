#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "common/json_util.hpp"
#include "legend/legend.hpp"
#include "qa/question_bank.hpp"

namespace scenediag::qa {

struct GroundTruth {
    AnswerKind kind = AnswerKind::integer;
    long long integer = 0;
    std::string label;
    /// Sorted and unique for label_list answers.
    std::vector<std::string> labels;
    std::string source;

    friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

Json to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(const Json& j);

/// "7", "king", "AS, 10H".
std::string answer_text(const GroundTruth& truth);

/// Values for the template's placeholders: `suit` is the suit of the first
/// face-up card (spades when there is none), `card` is the grid card.
std::map<std::string, std::string> bind_variables(const QuestionTemplate& t, const legend::Legend& legend);

/// Closed label vocabulary of a template for this legend.
std::vector<std::string> vocabulary(const QuestionTemplate& t, const legend::Legend& legend);

/// Ground truth routed by the template's oracle handler. The question text
/// supplies attributes (color, suit); the template body is used when empty.
/// Throws a validation error when the key does not apply to the legend, for
/// example single-piece localization on a multi-piece board.
GroundTruth extract_answer(const QuestionTemplate& t, const legend::Legend& legend, std::string_view question_text = {});
GroundTruth extract_answer(const QuestionBank& bank, std::string_view key, config::Game game,
                           const legend::Legend& legend, std::string_view question_text = {});

bool is_applicable(const QuestionTemplate& t, const legend::Legend& legend);

RenderedQuestion instantiate_question(const QuestionBank& bank, std::string_view key, config::Game game,
                                      const legend::Legend& legend, PrepromptKind preprompt,
                                      InstructionKind instruction);

/// What a perfect model would answer: `{answer : X}` under CoT preprompts,
/// the blank filled for missing_word, otherwise the declarative stub followed by X.
std::string oracle_response(const QuestionTemplate& t, const RenderedQuestion& q, const GroundTruth& truth);

}  // namespace scenediag::qa
