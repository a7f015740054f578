#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "common/json_util.hpp"
#include "config/config_core.hpp"

namespace scenediag::qa {

enum class PrepromptKind { neutral, helpful, debiased, cot, debiased_cot };
enum class InstructionKind { direct, declarative, missing_word };
enum class AnswerKind { integer, label, label_list };
enum class Category { counting, identification, localization, combined };

std::string_view to_string(PrepromptKind kind);
std::string_view to_string(InstructionKind kind);
std::string_view to_string(AnswerKind kind);
std::string_view to_string(Category category);
std::optional<PrepromptKind> preprompt_from_string(std::string_view name);
std::optional<InstructionKind> instruction_from_string(std::string_view name);
std::optional<AnswerKind> answer_kind_from_string(std::string_view name);

bool uses_cot(PrepromptKind kind);

inline constexpr std::string_view kBlank = "____";

struct QuestionTemplate {
    std::string key;
    config::Game game = config::Game::chess;
    Category category = Category::counting;
    AnswerKind answer = AnswerKind::integer;
    /// Closed label vocabulary: piece_types, colors, cards or players.
    std::string vocabulary;
    /// Name of the ground-truth handler.
    std::string oracle;
    std::string body;
    std::string declarative_stub;
    std::string fill_blank_stub;
    /// Placeholders such as `suit` or `card`, written `{suit}` in the texts.
    std::vector<std::string> variables;
};

struct QuestionBank {
    std::string version;
    std::map<std::string, std::string> debiased;  // game name -> text
    std::map<std::string, std::string> helpful;
    std::string cot_prefix;
    std::string cot_suffix;
    std::vector<QuestionTemplate> templates;

    const QuestionTemplate* find(std::string_view key, config::Game game) const;
    std::vector<std::string> keys(config::Game game) const;
};

QuestionBank load_question_bank(const Json& document);
QuestionBank load_question_bank_file(const std::string& path);
/// The bank compiled into the library from data/questions.json.
const QuestionBank& default_question_bank();

/// Preprompt text placed before the question (empty for neutral).
std::string preprompt_text(const QuestionBank& bank, PrepromptKind kind, config::Game game);

struct RenderedQuestion {
    std::string prompt;
    std::string key;
    config::Game game = config::Game::chess;
    PrepromptKind preprompt = PrepromptKind::neutral;
    InstructionKind instruction = InstructionKind::direct;
    AnswerKind answer = AnswerKind::integer;
    /// Question body after placeholder substitution, without preprompt.
    std::string question;
    std::map<std::string, std::string> bindings;
};

Json to_json(const RenderedQuestion& q);

/// Substitutes `{name}` placeholders; any placeholder left unresolved is a
/// validation error.
std::string substitute(std::string_view text, const std::map<std::string, std::string>& bindings);

/// The question sentence in the given instruction form: direct body,
/// body followed by the declarative stub, or the fill-in-the-blank sentence.
std::string instruction_form(const QuestionTemplate& t, InstructionKind kind,
                             const std::map<std::string, std::string>& bindings);

/// Assembles preprompt, CoT prefix, question and CoT suffix with single spaces.
RenderedQuestion render_question(const QuestionBank& bank, const QuestionTemplate& t, PrepromptKind preprompt,
                                 InstructionKind instruction, const std::map<std::string, std::string>& bindings);

struct PromptCombination {
    std::string key;
    PrepromptKind preprompt = PrepromptKind::neutral;
    InstructionKind instruction = InstructionKind::direct;

    friend bool operator==(const PromptCombination&, const PromptCombination&) = default;
};

/// Full cross product, key-major, in declaration order.
std::vector<PromptCombination> enumerate_combinations(const std::vector<std::string>& keys,
                                                      const std::vector<PrepromptKind>& preprompts,
                                                      const std::vector<InstructionKind>& instructions);

}  // namespace scenediag::qa
