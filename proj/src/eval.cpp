#include "clicklab/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "clicklab/errors.hpp"
#include "clicklab/parallel.hpp"
#include "clicklab/rng.hpp"
#include "clicklab/video_views.hpp"

namespace clicklab {

std::string_view to_string(EvalTask t) {
    return t == EvalTask::multiclass5 ? "multiclass5" : "binary_early";
}

double accuracy(const ConfusionMatrix& confusion) {
    if (confusion.empty()) throw EmptyMatrixError();
    std::int64_t total = 0;
    std::int64_t diagonal = 0;
    for (std::size_t i = 0; i < confusion.size(); ++i) {
        for (std::size_t j = 0; j < confusion[i].size(); ++j) {
            total += confusion[i][j];
            if (i == j) diagonal += confusion[i][j];
        }
    }
    if (total == 0) throw EmptyMatrixError();
    return static_cast<double>(diagonal) / static_cast<double>(total);
}

RocResult roc_curve(const std::vector<double>& scores, const std::vector<bool>& labels) {
    if (scores.size() != labels.size())
        throw SchemaMismatchError("scores and labels lengths differ");
    std::int64_t n_pos = 0;
    std::int64_t n_neg = 0;
    for (bool l : labels) (l ? n_pos : n_neg) += 1;
    if (n_pos == 0 || n_neg == 0) throw SingleClassError();

    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    RocResult result;
    result.points.push_back({0.0, 0.0});
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    double area = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        // Group tied scores into one threshold step.
        std::size_t j = i;
        std::int64_t d_tp = 0;
        std::int64_t d_fp = 0;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            (labels[order[j]] ? d_tp : d_fp) += 1;
            ++j;
        }
        double tpr0 = static_cast<double>(tp) / static_cast<double>(n_pos);
        double fpr0 = static_cast<double>(fp) / static_cast<double>(n_neg);
        tp += d_tp;
        fp += d_fp;
        double tpr1 = static_cast<double>(tp) / static_cast<double>(n_pos);
        double fpr1 = static_cast<double>(fp) / static_cast<double>(n_neg);
        area += (fpr1 - fpr0) * (tpr0 + tpr1) / 2.0;
        result.points.push_back({fpr1, tpr1});
        i = j;
    }
    result.auroc = area;
    return result;
}

double multiclass_auroc(const std::vector<std::vector<double>>& per_class_scores,
                        const std::vector<std::size_t>& labels, bool weighted) {
    const std::size_t n_classes = per_class_scores.size();
    if (n_classes < 2) throw SingleClassError();
    const std::size_t n = labels.size();

    double weighted_sum = 0.0;
    double weight_total = 0.0;
    std::size_t classes_present = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        std::vector<bool> binary(n);
        std::size_t positives = 0;
        for (std::size_t i = 0; i < n; ++i) {
            binary[i] = labels[i] == c;
            positives += binary[i] ? 1 : 0;
        }
        if (positives == 0 || positives == n) continue;
        double auc = roc_curve(per_class_scores[c], binary).auroc;
        double weight = weighted ? static_cast<double>(positives) : 1.0;
        weighted_sum += weight * auc;
        weight_total += weight;
        ++classes_present;
    }
    if (classes_present == 0) throw SingleClassError();
    return weighted_sum / weight_total;
}

FeatureTable merge_task(const FeatureTable& five_class) {
    FeatureTable merged = five_class;
    std::vector<std::optional<std::string>> labels;
    labels.reserve(five_class.row_count);
    for (std::size_t r = 0; r < five_class.row_count; ++r) {
        if (five_class.class_column.codes[r] < 0)
            throw UnknownLabelError("<missing>");
        std::string_view label = five_class.class_column.text_at(r);
        auto exit_class = exit_class_from(label);
        if (!exit_class) throw UnknownLabelError(std::string(label));
        labels.push_back(std::string(to_binary(*exit_class) ? kEarlyLabel : kLateLabel));
    }
    merged.set_class(Column::nominal(five_class.class_column.name, labels));
    return merged;
}

namespace {

std::size_t label_index(const std::vector<std::string>& labels, std::string_view label) {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw UnknownLabelError(std::string(label));
    return static_cast<std::size_t>(it - labels.begin());
}

}  // namespace

EvalReport cross_validate(const LearnerConfig& learner, const FeatureTable& table,
                          std::size_t k, std::uint64_t seed, unsigned jobs) {
    auto start = std::chrono::steady_clock::now();

    EvalReport report;
    report.learner = std::string(to_string(learner.kind));
    report.folds = k;
    report.seed = seed;
    report.class_labels = table.class_labels();
    const std::size_t n_classes = report.class_labels.size();
    bool binary_early = n_classes == 2 && report.class_labels[0] == kEarlyLabel &&
                        report.class_labels[1] == kLateLabel;
    report.task = binary_early ? EvalTask::binary_early : EvalTask::multiclass5;

    FoldAssignment assignment = stratified_folds(table, k, seed);

    // Pooled prediction store: distribution + actual per row.
    std::vector<ClassDistribution> predictions(table.row_count);
    std::vector<std::size_t> actual(table.row_count);
    report.per_fold_confusions.assign(
        k, ConfusionMatrix(n_classes, std::vector<std::int64_t>(n_classes, 0)));

    parallel_for(k, jobs, [&](std::size_t fold) {
        std::vector<std::size_t> train_rows = assignment.rows_not_in_fold(fold);
        std::vector<std::size_t> test_rows = assignment.rows_in_fold(fold);
        if (test_rows.empty()) return;
        FeatureTable train_table = table.select_rows(train_rows);

        LearnerConfig fold_config = learner;
        fold_config.seed = derive_seed(seed, "cv_fold", fold);
        std::unique_ptr<Model> model = train_model(train_table, fold_config);

        // The fold model may have seen fewer classes than the full table.
        std::vector<std::size_t> model_to_table(model->class_labels.size());
        for (std::size_t c = 0; c < model->class_labels.size(); ++c) {
            model_to_table[c] = label_index(report.class_labels, model->class_labels[c]);
        }

        EncodedTable encoded = encode_for_model(*model, table);
        for (std::size_t r : test_rows) {
            ClassDistribution local = model->predict_encoded(encoded, r);
            ClassDistribution full;
            full.probabilities.assign(n_classes, 0.0);
            for (std::size_t c = 0; c < local.probabilities.size(); ++c) {
                full.probabilities[model_to_table[c]] = local.probabilities[c];
            }
            std::size_t predicted = predicted_index(full);
            std::size_t truth =
                label_index(report.class_labels, table.class_column.text_at(r));
            report.per_fold_confusions[fold][truth][predicted] += 1;
            predictions[r] = std::move(full);
            actual[r] = truth;
        }
    });

    report.pooled_confusion.assign(n_classes,
                                   std::vector<std::int64_t>(n_classes, 0));
    for (const auto& fold_confusion : report.per_fold_confusions) {
        for (std::size_t i = 0; i < n_classes; ++i) {
            for (std::size_t j = 0; j < n_classes; ++j) {
                report.pooled_confusion[i][j] += fold_confusion[i][j];
            }
        }
    }
    report.accuracy = accuracy(report.pooled_confusion);

    if (binary_early) {
        std::size_t early_index = label_index(report.class_labels, kEarlyLabel);
        std::vector<double> scores(table.row_count);
        std::vector<bool> labels(table.row_count);
        for (std::size_t r = 0; r < table.row_count; ++r) {
            scores[r] = predictions[r].probabilities[early_index];
            labels[r] = actual[r] == early_index;
        }
        RocResult roc = roc_curve(scores, labels);
        report.roc_points = roc.points;
        report.auroc = roc.auroc;
    } else {
        std::vector<std::vector<double>> per_class(n_classes,
                                                   std::vector<double>(table.row_count));
        for (std::size_t c = 0; c < n_classes; ++c) {
            for (std::size_t r = 0; r < table.row_count; ++r) {
                per_class[c][r] = predictions[r].probabilities[c];
            }
        }
        report.auroc = multiclass_auroc(per_class, actual, true);
        report.per_class_roc_points.resize(n_classes);
        for (std::size_t c = 0; c < n_classes; ++c) {
            std::vector<bool> binary(table.row_count);
            bool any_pos = false;
            bool any_neg = false;
            for (std::size_t r = 0; r < table.row_count; ++r) {
                binary[r] = actual[r] == c;
                (binary[r] ? any_pos : any_neg) = true;
            }
            if (any_pos && any_neg) {
                report.per_class_roc_points[c] = roc_curve(per_class[c], binary).points;
            }
        }
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

namespace {

nlohmann::ordered_json confusion_json(const ConfusionMatrix& m) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& row : m) j.push_back(nlohmann::ordered_json(row));
    return j;
}

}  // namespace

std::string EvalReport::to_json() const {
    // wall_seconds is deliberately not serialized: identical inputs and seed
    // must produce byte-identical report files.
    nlohmann::ordered_json j;
    j["learner"] = learner;
    j["task"] = std::string(to_string(task));
    j["class_labels"] = class_labels;
    j["folds"] = folds;
    j["seed"] = seed;
    j["accuracy"] = accuracy;
    j["auroc"] = auroc;
    j["pooled_confusion"] = confusion_json(pooled_confusion);
    nlohmann::ordered_json fold_arr = nlohmann::ordered_json::array();
    for (const auto& m : per_fold_confusions) fold_arr.push_back(confusion_json(m));
    j["per_fold_confusions"] = std::move(fold_arr);
    auto points_json = [](const std::vector<RocPoint>& points) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& p : points) arr.push_back({p.fpr, p.tpr});
        return arr;
    };
    if (task == EvalTask::binary_early) {
        j["roc_points"] = points_json(roc_points);
    } else {
        nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < per_class_roc_points.size(); ++c) {
            per_class[class_labels[c]] = points_json(per_class_roc_points[c]);
        }
        j["roc_points"] = std::move(per_class);
    }
    return j.dump(2) + "\n";
}

std::string EvalReport::summary_csv_row() const {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s,%s,%.6f,%.6f,%llu\n", learner.c_str(),
                  std::string(to_string(task)).c_str(), accuracy, auroc,
                  static_cast<unsigned long long>(seed));
    return buf;
}

std::string EvalReport::roc_csv() const {
    std::string out = "fpr,tpr\n";
    char buf[80];
    const std::vector<RocPoint>* points = &roc_points;
    // Multiclass reports export the first available one-vs-rest curve set
    // concatenated with a class column.
    if (task == EvalTask::multiclass5) {
        out = "class,fpr,tpr\n";
        for (std::size_t c = 0; c < per_class_roc_points.size(); ++c) {
            for (const auto& p : per_class_roc_points[c]) {
                std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f\n",
                              class_labels[c].c_str(), p.fpr, p.tpr);
                out += buf;
            }
        }
        return out;
    }
    for (const auto& p : *points) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f\n", p.fpr, p.tpr);
        out += buf;
    }
    return out;
}

}  // namespace clicklab
