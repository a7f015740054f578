#include "qa/question_bank.hpp"

#include <algorithm>

#include "qa/default_bank.hpp"

namespace scenediag::qa {

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::pair<E, std::string_view> (&table)[N], std::string_view name) {
    for (const auto& [value, text] : table)
        if (text == name) return value;
    return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view name_of(const std::pair<E, std::string_view> (&table)[N], E value) {
    for (const auto& [v, text] : table)
        if (v == value) return text;
    return "?";
}

constexpr std::pair<PrepromptKind, std::string_view> kPreprompts[] = {
    {PrepromptKind::neutral, "neutral"},
    {PrepromptKind::helpful, "helpful"},
    {PrepromptKind::debiased, "debiased"},
    {PrepromptKind::cot, "cot"},
    {PrepromptKind::debiased_cot, "debiased_cot"},
};

constexpr std::pair<InstructionKind, std::string_view> kInstructions[] = {
    {InstructionKind::direct, "direct"},
    {InstructionKind::declarative, "declarative"},
    {InstructionKind::missing_word, "missing_word"},
};

constexpr std::pair<AnswerKind, std::string_view> kAnswerKinds[] = {
    {AnswerKind::integer, "integer"},
    {AnswerKind::label, "label"},
    {AnswerKind::label_list, "label_list"},
};

constexpr std::pair<Category, std::string_view> kCategories[] = {
    {Category::counting, "counting"},
    {Category::identification, "identification"},
    {Category::localization, "localization"},
    {Category::combined, "combined"},
};

constexpr std::string_view kVocabularies[] = {"piece_types", "colors", "cards", "players"};

std::string required_text(const Json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string() || it->get<std::string>().empty())
        fail_validation(path + "." + key + ": required non-empty string");
    return it->get<std::string>();
}

std::map<std::string, std::string> per_game_text(const Json& j, const std::string& path) {
    std::map<std::string, std::string> out;
    if (j.is_null()) return out;
    if (!j.is_object()) fail_validation(path + ": expected a mapping of game -> text");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!config::game_from_string(it.key())) fail_validation(path + "." + it.key() + ": unknown game");
        if (!it->is_string()) fail_validation(path + "." + it.key() + ": expected text");
        out[it.key()] = it->get<std::string>();
    }
    return out;
}

QuestionTemplate parse_template(const Json& j, config::Game game, const std::string& path) {
    if (!j.is_object()) fail_validation(path + ": expected a mapping");
    QuestionTemplate t;
    t.game = game;
    t.key = required_text(j, "key", path);
    const std::string category = required_text(j, "category", path);
    auto c = lookup(kCategories, category);
    if (!c) fail_validation(path + ".category: unknown category '" + category + "'");
    t.category = *c;
    const std::string answer = get_or<std::string>(j, "answer", "integer", path);
    auto a = answer_kind_from_string(answer);
    if (!a) fail_validation(path + ".answer: unknown answer kind '" + answer + "'");
    t.answer = *a;
    t.vocabulary = get_or<std::string>(j, "vocabulary", "", path);
    if (t.answer != AnswerKind::integer &&
        std::find(std::begin(kVocabularies), std::end(kVocabularies), t.vocabulary) == std::end(kVocabularies))
        fail_validation(path + ".vocabulary: label answers need one of piece_types, colors, cards, players");
    t.oracle = required_text(j, "oracle", path);
    t.body = required_text(j, "body", path);
    t.declarative_stub = required_text(j, "declarative", path);
    t.fill_blank_stub = required_text(j, "missing_word", path);
    if (t.fill_blank_stub.find(kBlank) == std::string::npos)
        fail_validation(path + ".missing_word: must contain the blank " + std::string(kBlank));
    if (auto v = j.find("variables"); v != j.end()) {
        if (!v->is_array()) fail_validation(path + ".variables: expected a list");
        for (const auto& name : *v) t.variables.push_back(name.get<std::string>());
    }
    return t;
}

std::string join_parts(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (p.empty()) continue;
        if (!out.empty()) out += ' ';
        out += p;
    }
    return out;
}

}  // namespace

std::string_view to_string(PrepromptKind kind) { return name_of(kPreprompts, kind); }
std::string_view to_string(InstructionKind kind) { return name_of(kInstructions, kind); }
std::string_view to_string(AnswerKind kind) { return name_of(kAnswerKinds, kind); }
std::string_view to_string(Category category) { return name_of(kCategories, category); }
std::optional<PrepromptKind> preprompt_from_string(std::string_view name) { return lookup(kPreprompts, name); }
std::optional<InstructionKind> instruction_from_string(std::string_view name) { return lookup(kInstructions, name); }
std::optional<AnswerKind> answer_kind_from_string(std::string_view name) { return lookup(kAnswerKinds, name); }

bool uses_cot(PrepromptKind kind) { return kind == PrepromptKind::cot || kind == PrepromptKind::debiased_cot; }

const QuestionTemplate* QuestionBank::find(std::string_view key, config::Game game) const {
    for (const auto& t : templates)
        if (t.key == key && t.game == game) return &t;
    return nullptr;
}

std::vector<std::string> QuestionBank::keys(config::Game game) const {
    std::vector<std::string> out;
    for (const auto& t : templates)
        if (t.game == game) out.push_back(t.key);
    return out;
}

QuestionBank load_question_bank(const Json& doc) {
    if (!doc.is_object()) fail_validation("question bank: expected a mapping");
    QuestionBank bank;
    bank.version = get_or<std::string>(doc, "version", "", "question bank");
    const Json pre = doc.value("preprompts", Json::object());
    bank.debiased = per_game_text(pre.value("debiased", Json()), "preprompts.debiased");
    bank.helpful = per_game_text(pre.value("helpful", Json()), "preprompts.helpful");
    if (bank.helpful.empty()) bank.helpful = bank.debiased;
    const Json cot = pre.value("cot", Json::object());
    bank.cot_prefix = get_or<std::string>(cot, "prefix", "", "preprompts.cot");
    bank.cot_suffix = get_or<std::string>(cot, "suffix", "", "preprompts.cot");

    const Json questions = doc.value("questions", Json::object());
    if (!questions.is_object()) fail_validation("questions: expected a mapping of game -> list");
    for (auto it = questions.begin(); it != questions.end(); ++it) {
        auto game = config::game_from_string(it.key());
        if (!game) fail_validation("questions." + it.key() + ": unknown game");
        if (!it->is_array()) fail_validation("questions." + it.key() + ": expected a list");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string path = "questions." + it.key() + "[" + std::to_string(i) + "]";
            QuestionTemplate t = parse_template((*it)[i], *game, path);
            if (bank.find(t.key, t.game)) fail_validation(path + ".key: duplicate key '" + t.key + "'");
            bank.templates.push_back(std::move(t));
        }
    }
    if (bank.templates.empty()) fail_validation("question bank: no questions");
    return bank;
}

QuestionBank load_question_bank_file(const std::string& path) {
    return load_question_bank(parse_structured_text(read_text_file(path)));
}

const QuestionBank& default_question_bank() {
    static const QuestionBank bank = load_question_bank(Json::parse(generated::kDefaultBank));
    return bank;
}

std::string preprompt_text(const QuestionBank& bank, PrepromptKind kind, config::Game game) {
    const std::string g(config::to_string(game));
    auto pick = [&](const std::map<std::string, std::string>& m) {
        auto it = m.find(g);
        return it == m.end() ? std::string() : it->second;
    };
    switch (kind) {
        case PrepromptKind::neutral: return "";
        case PrepromptKind::helpful: return pick(bank.helpful);
        case PrepromptKind::debiased: return pick(bank.debiased);
        case PrepromptKind::cot: return bank.cot_prefix;
        case PrepromptKind::debiased_cot: return join_parts({pick(bank.debiased), bank.cot_prefix});
    }
    return "";
}

Json to_json(const RenderedQuestion& q) {
    Json bindings = Json::object();
    for (const auto& [k, v] : q.bindings) bindings[k] = v;
    return Json{{"key", q.key},
                {"game", std::string(config::to_string(q.game))},
                {"preprompt", std::string(to_string(q.preprompt))},
                {"instruction", std::string(to_string(q.instruction))},
                {"answer_kind", std::string(to_string(q.answer))},
                {"question", q.question},
                {"bindings", std::move(bindings)},
                {"prompt", q.prompt}};
}

std::string substitute(std::string_view text, const std::map<std::string, std::string>& bindings) {
    std::string out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '{') {
            const std::size_t close = text.find('}', i);
            if (close == std::string_view::npos) fail_validation("question text: unterminated placeholder");
            const std::string name(text.substr(i + 1, close - i - 1));
            auto it = bindings.find(name);
            if (it == bindings.end()) fail_validation("question text: unresolved placeholder {" + name + "}");
            out += it->second;
            i = close + 1;
        } else {
            out += text[i++];
        }
    }
    return out;
}

std::string instruction_form(const QuestionTemplate& t, InstructionKind kind,
                             const std::map<std::string, std::string>& bindings) {
    switch (kind) {
        case InstructionKind::direct: return substitute(t.body, bindings);
        case InstructionKind::declarative:
            return substitute(t.body, bindings) + " " + substitute(t.declarative_stub, bindings);
        case InstructionKind::missing_word: return substitute(t.fill_blank_stub, bindings);
    }
    return "";
}

RenderedQuestion render_question(const QuestionBank& bank, const QuestionTemplate& t, PrepromptKind preprompt,
                                 InstructionKind instruction, const std::map<std::string, std::string>& bindings) {
    RenderedQuestion q;
    q.key = t.key;
    q.game = t.game;
    q.preprompt = preprompt;
    q.instruction = instruction;
    q.answer = t.answer;
    q.bindings = bindings;
    q.question = instruction_form(t, instruction, bindings);
    q.prompt = join_parts({preprompt_text(bank, preprompt, t.game), q.question,
                           uses_cot(preprompt) ? bank.cot_suffix : std::string()});
    return q;
}

std::vector<PromptCombination> enumerate_combinations(const std::vector<std::string>& keys,
                                                      const std::vector<PrepromptKind>& preprompts,
                                                      const std::vector<InstructionKind>& instructions) {
    std::vector<PromptCombination> out;
    out.reserve(keys.size() * preprompts.size() * instructions.size());
    for (const auto& k : keys)
        for (auto p : preprompts)
            for (auto i : instructions) out.push_back({k, p, i});
    return out;
}

}  // namespace scenediag::qa
