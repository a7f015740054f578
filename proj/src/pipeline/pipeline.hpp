#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/json_util.hpp"
#include "config/config_core.hpp"
#include "diag/report.hpp"
#include "legend/legend.hpp"
#include "qa/question_bank.hpp"
#include "vlm/client.hpp"
#include "vlm/usage.hpp"

namespace scenediag::pipeline {

enum class Status { pending, rendered, evaluated, scored };

std::string_view to_string(Status s);
std::optional<Status> status_from_string(std::string_view name);

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitPartial = 3;
inline constexpr int kExitIo = 4;

int exit_code_for(ErrorKind kind);

struct GenerateOptions {
    std::optional<std::uint64_t> seed;
    /// Stops after this many newly rendered scenes, leaving a resumable run.
    std::size_t max_new_scenes = std::numeric_limits<std::size_t>::max();
    const qa::QuestionBank* bank = nullptr;
};

struct GenerateResult {
    std::size_t total = 0;
    std::size_t rendered = 0;
    std::size_t skipped = 0;
    bool complete = false;
    Json manifest;
};

/// Resolves, renders and writes image, legends, scene spec and QA file for
/// every combination; the manifest is rewritten after each scene. An existing
/// manifest with the same spec hash resumes; a different hash is refused.
GenerateResult run_generate(const config::DatasetSpec& spec, const std::string& out_dir,
                            const GenerateOptions& options = {});
GenerateResult run_generate_file(const std::string& spec_path, const std::string& out_dir,
                                 const GenerateOptions& options = {});

/// Question grid written to each QA file. Defaults: every applicable bank
/// key, debiased preprompt, declarative instruction.
struct QuestionGrid {
    std::vector<std::string> keys;
    std::vector<qa::PrepromptKind> preprompts{qa::PrepromptKind::debiased};
    std::vector<qa::InstructionKind> instructions{qa::InstructionKind::declarative};
};

QuestionGrid question_grid_from_json(const Json& j);

/// QA file content for one legend: items with prompt and ground truth.
Json build_qa(const qa::QuestionBank& bank, const legend::Legend& legend, const QuestionGrid& grid);

struct EvaluateOptions {
    std::vector<qa::PrepromptKind> preprompts{qa::PrepromptKind::debiased};
    std::vector<qa::InstructionKind> instructions{qa::InstructionKind::declarative};
    /// Empty: the keys found in each scene's QA file.
    std::vector<std::string> keys;
    bool live = false;
    const qa::QuestionBank* bank = nullptr;
    vlm::QueryOptions query;
};

struct EvaluateResult {
    std::size_t items = 0;
    std::size_t succeeded = 0;
    std::size_t failed = 0;
    std::size_t reused = 0;
    std::size_t unparsed = 0;
    vlm::UsageSummary usage;
    int exit_code = kExitOk;
};

/// Queries the endpoint for every image x (key, preprompt, instruction),
/// parses and scores the answers. Successful exchanges already present in
/// exchanges.jsonl with the same prompt are reused rather than re-sent.
EvaluateResult run_evaluate(const std::string& dataset_dir, const vlm::EndpointSpec& endpoint,
                            const EvaluateOptions& options = {});

struct DiagnoseResult {
    Json report;
    std::size_t records = 0;
};

/// Reads records.jsonl and writes report.json, report.csv and plots/*.csv.
DiagnoseResult run_diagnose(const std::string& dataset_dir, const diag::ReportConfig& config);

std::vector<diag::EvalRecord> read_records(const std::string& path);

}  // namespace scenediag::pipeline
