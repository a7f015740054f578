#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "common/json_util.hpp"
#include "qa/oracle.hpp"
#include "vlm/answer_parser.hpp"

namespace scenediag::diag {

struct EvalRecord {
    std::size_t scene_index = 0;
    std::string image;
    std::string question_key;
    std::string game;
    /// Variable path -> level value of the scene.
    Json assignments = Json::object();
    std::string preprompt = "neutral";
    std::string instruction = "direct";
    qa::GroundTruth truth;
    vlm::ParsedAnswer answer;
    bool correct = false;
    /// Integer answers only.
    std::optional<double> abs_error;
    std::optional<double> norm_error;
    bool unparsed = false;
    std::string exchange_id;
};

Json to_json(const EvalRecord& r);
EvalRecord eval_record_from_json(const Json& j);

struct Score {
    bool correct = false;
    std::optional<double> abs_error;
    std::optional<double> norm_error;
    bool unparsed = false;
};

/// Integer kinds: |pred - t|, normalized by |t| when t != 0. Labels compare
/// case-insensitively, lists as sets. An unparsed answer is incorrect and, for
/// integer kinds, enters with error |t|.
Score score_answer(const qa::GroundTruth& truth, const vlm::ParsedAnswer& answer);

/// Fills correct/abs_error/norm_error/unparsed from truth and answer.
void score_record(EvalRecord& r);

struct GridCell {
    int row = 0;
    int col = 0;
};

/// |Δrow| + |Δcol|.
int l_loc(GridCell truth, GridCell prediction);

struct MetricSuite {
    std::size_t n = 0;
    std::size_t n_numeric = 0;
    double accuracy = 0;
    /// Macro one-vs-rest over the distinct truth values. Not decomposable, so
    /// merged suites leave them empty.
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    double mae = 0;
    double mse = 0;
    double nmae = 0;
    double unparsed_rate = 0;
};

Json to_json(const MetricSuite& s);

/// Throws a validation error on an empty set.
MetricSuite compute_suite(const std::vector<EvalRecord>& records);
MetricSuite compute_suite(const std::vector<const EvalRecord*>& records);

/// Count-weighted merge of accuracy, MAE, MSE, NMAE and the unparsed rate.
MetricSuite merge_suites(const MetricSuite& a, const MetricSuite& b);

/// Class key of a truth or an answer, used for the confusion matrix and F1.
std::string truth_key(const qa::GroundTruth& truth);
std::string answer_key(const vlm::ParsedAnswer& answer);

}  // namespace scenediag::diag
