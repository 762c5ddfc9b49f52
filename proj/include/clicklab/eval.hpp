#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clicklab/feature_table.hpp"
#include "clicklab/folds.hpp"
#include "clicklab/learners/train.hpp"

namespace clicklab {

enum class EvalTask { multiclass5, binary_early };

std::string_view to_string(EvalTask t);

using ConfusionMatrix = std::vector<std::vector<std::int64_t>>;  // [actual][predicted]

double accuracy(const ConfusionMatrix& confusion);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocResult {
    std::vector<RocPoint> points;
    double auroc = 0.5;
};

// ROC by descending-score threshold sweep with tied scores grouped; AUROC by
// trapezoidal integration. labels[i] is true for positives.
RocResult roc_curve(const std::vector<double>& scores, const std::vector<bool>& labels);

// Prevalence-weighted one-vs-rest AUROC (macro averaging optional).
// per_class_scores[c][i] is the probability row i belongs to class c.
double multiclass_auroc(const std::vector<std::vector<double>>& per_class_scores,
                        const std::vector<std::size_t>& labels, bool weighted = true);

// Replaces the five exit classes with the early/late merge; features and row
// order untouched.
FeatureTable merge_task(const FeatureTable& five_class);

struct EvalReport {
    std::string learner;
    EvalTask task = EvalTask::multiclass5;
    std::vector<std::string> class_labels;
    std::vector<ConfusionMatrix> per_fold_confusions;
    ConfusionMatrix pooled_confusion;
    double accuracy = 0.0;
    double auroc = 0.5;
    std::vector<RocPoint> roc_points;                          // binary task
    std::vector<std::vector<RocPoint>> per_class_roc_points;   // multiclass task
    std::size_t folds = 0;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;  // informational; never serialized

    std::string to_json() const;
    std::string summary_csv_row() const;
    std::string roc_csv() const;
};

// Stratified k-fold cross-validation with pooled predictions. For the binary
// task the positive class is "early".
EvalReport cross_validate(const LearnerConfig& learner, const FeatureTable& table,
                          std::size_t k, std::uint64_t seed, unsigned jobs = 1);

inline constexpr std::string_view kSummaryCsvHeader = "learner,task,accuracy,auroc,seed\n";

}  // namespace clicklab
