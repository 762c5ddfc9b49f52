#include "clicklab/learners/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "clicklab/errors.hpp"
#include "clicklab/feature_select.hpp"

namespace clicklab {

std::size_t NaiveBayesModel::category_count(std::size_t f) const {
    const FeatureSchema& schema = features[f];
    return schema.kind == ColumnKind::nominal ? schema.values.size()
                                              : schema.cuts.size() + 1;
}

namespace {

// Category index for an encoded cell: values 0..V-1, missing V, unseen -1
// (handled by the smoothing floor).
std::int32_t category_of(const NaiveBayesModel& model, std::size_t f,
                         const EncodedTable& data, std::size_t row) {
    const FeatureSchema& schema = model.features[f];
    if (schema.kind == ColumnKind::nominal) {
        std::int32_t code = data.nominal[f][row];
        if (code == kMissingCode)
            return static_cast<std::int32_t>(model.category_count(f));
        return code;  // kUnseenCode stays negative
    }
    double v = (*data.numeric[f])[row];
    if (v != v) return static_cast<std::int32_t>(model.category_count(f));
    return bin_for(schema.cuts, v);
}

ClassDistribution posterior(const NaiveBayesModel& model,
                            const std::function<std::int32_t(std::size_t)>& category) {
    const std::size_t n_classes = model.class_labels.size();
    std::int64_t total = 0;
    for (auto c : model.class_counts) total += c;

    std::vector<double> log_p(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
        log_p[c] = std::log(static_cast<double>(model.class_counts[c] + 1) /
                            static_cast<double>(total + static_cast<std::int64_t>(n_classes)));
    }
    for (std::size_t f = 0; f < model.features.size(); ++f) {
        std::int32_t cat = category(f);
        const auto& table = model.counts[f];
        double denom_extra = static_cast<double>(table.size()) + 1.0;
        for (std::size_t c = 0; c < n_classes; ++c) {
            double denom = static_cast<double>(model.class_counts[c]) + denom_extra;
            std::int64_t count =
                cat >= 0 ? table[static_cast<std::size_t>(cat)][c] : 0;
            log_p[c] += std::log((static_cast<double>(count) + 1.0) / denom);
        }
    }
    double max_lp = *std::max_element(log_p.begin(), log_p.end());
    ClassDistribution dist;
    dist.probabilities.resize(n_classes);
    double sum = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        dist.probabilities[c] = std::exp(log_p[c] - max_lp);
        sum += dist.probabilities[c];
    }
    for (auto& p : dist.probabilities) p /= sum;
    return dist;
}

}  // namespace

ClassDistribution NaiveBayesModel::predict_encoded(const EncodedTable& data,
                                                   std::size_t row) const {
    return posterior(*this, [&](std::size_t f) { return category_of(*this, f, data, row); });
}

ClassDistribution NaiveBayesModel::predict_numeric_row(
    std::span<const double> values) const {
    return posterior(*this, [&](std::size_t f) -> std::int32_t {
        double v = values[f];
        if (v != v) return static_cast<std::int32_t>(category_count(f));
        return bin_for(features[f].cuts, v);
    });
}

nlohmann::json NaiveBayesModel::params_to_json() const {
    nlohmann::json j;
    j["class_counts"] = class_counts;
    j["counts"] = counts;
    return j;
}

void NaiveBayesModel::params_from_json(const nlohmann::json& j) {
    class_counts = j.at("class_counts").get<std::vector<std::int64_t>>();
    counts = j.at("counts")
                 .get<std::vector<std::vector<std::vector<std::int64_t>>>>();
}

std::unique_ptr<NaiveBayesModel> train_naive_bayes(const TrainView& view,
                                                   std::uint64_t seed) {
    if (view.rows == 0) throw EmptyTableError();
    auto model = std::make_unique<NaiveBayesModel>();
    model->kind = LearnerKind::naive_bayes;
    model->class_labels = view.class_labels;
    model->features = view.schemas;
    model->train_seed = seed;

    const std::size_t n_classes = view.class_labels.size();
    model->class_counts.assign(n_classes, 0);
    for (auto c : view.class_codes) ++model->class_counts[static_cast<std::size_t>(c)];

    model->counts.resize(view.feature_count());
    for (std::size_t f = 0; f < view.feature_count(); ++f) {
        FeatureSchema& schema = model->features[f];
        std::vector<std::int32_t> cats(view.rows);
        std::size_t n_values = 0;
        if (schema.kind == ColumnKind::nominal) {
            n_values = schema.values.size();
            for (std::size_t r = 0; r < view.rows; ++r) {
                std::int32_t code = view.nominal[f][r];
                cats[r] = code == kMissingCode ? static_cast<std::int32_t>(n_values) : code;
            }
        } else {
            bool all_missing = true;
            for (double v : *view.numeric[f]) {
                if (v == v) {
                    all_missing = false;
                    break;
                }
            }
            if (all_missing) {
                schema.cuts.clear();
                n_values = 1;
                std::fill(cats.begin(), cats.end(), 1);
            } else {
                Discretized d = equal_frequency_bins(*view.numeric[f], kDiscretizeBins);
                schema.cuts = d.cuts;
                n_values = static_cast<std::size_t>(d.bin_count);
                for (std::size_t r = 0; r < view.rows; ++r) {
                    cats[r] = d.bins[r] < 0 ? static_cast<std::int32_t>(n_values) : d.bins[r];
                }
            }
        }
        auto& table = model->counts[f];
        table.assign(n_values + 1, std::vector<std::int64_t>(n_classes, 0));
        for (std::size_t r = 0; r < view.rows; ++r) {
            ++table[static_cast<std::size_t>(cats[r])]
                   [static_cast<std::size_t>(view.class_codes[r])];
        }
    }
    return model;
}

}  // namespace clicklab
