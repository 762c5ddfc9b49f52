#include "clicklab/learners/model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "clicklab/errors.hpp"
#include "clicklab/learners/decision_table.hpp"
#include "clicklab/learners/ensemble.hpp"
#include "clicklab/learners/naive_bayes.hpp"
#include "clicklab/learners/ripper.hpp"
#include "clicklab/learners/tree.hpp"

namespace clicklab {

std::string_view to_string(LearnerKind k) {
    switch (k) {
        case LearnerKind::naive_bayes: return "naive_bayes";
        case LearnerKind::c45: return "c45";
        case LearnerKind::ripper: return "ripper";
        case LearnerKind::decision_table: return "decision_table";
        case LearnerKind::random_forest: return "random_forest";
        case LearnerKind::random_subspace: return "random_subspace";
        case LearnerKind::stacking: return "stacking";
    }
    return "naive_bayes";
}

std::optional<LearnerKind> learner_kind_from(std::string_view s) {
    for (LearnerKind k : all_learner_kinds()) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

const std::vector<LearnerKind>& all_learner_kinds() {
    static const std::vector<LearnerKind> kinds = {
        LearnerKind::naive_bayes,     LearnerKind::c45,
        LearnerKind::ripper,          LearnerKind::decision_table,
        LearnerKind::random_forest,   LearnerKind::random_subspace,
        LearnerKind::stacking,
    };
    return kinds;
}

TrainView make_train_view(const FeatureTable& table) {
    if (table.row_count == 0) throw EmptyTableError();
    TrainView view;
    view.rows = table.row_count;
    view.class_labels = table.class_labels();

    // Recode the class column onto sorted labels.
    std::unordered_map<std::string_view, std::int32_t> class_index;
    for (std::size_t i = 0; i < view.class_labels.size(); ++i)
        class_index.emplace(view.class_labels[i], static_cast<std::int32_t>(i));
    view.class_codes.reserve(view.rows);
    for (std::size_t r = 0; r < view.rows; ++r) {
        if (table.class_column.codes[r] < 0)
            throw SchemaMismatchError("class label missing at row " + std::to_string(r));
        view.class_codes.push_back(
            class_index.at(table.class_column.text_at(r)));
    }

    view.schemas.reserve(table.columns.size());
    view.nominal.resize(table.columns.size());
    view.numeric.assign(table.columns.size(), nullptr);
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        const Column& col = table.columns[c];
        FeatureSchema schema;
        schema.name = col.name;
        schema.kind = col.kind;
        if (col.kind == ColumnKind::nominal) {
            schema.values = col.dict;
            std::sort(schema.values.begin(), schema.values.end());
            schema.values.erase(
                std::unique(schema.values.begin(), schema.values.end()),
                schema.values.end());
            std::unordered_map<std::string_view, std::int32_t> remap;
            for (std::size_t i = 0; i < schema.values.size(); ++i)
                remap.emplace(schema.values[i], static_cast<std::int32_t>(i));
            std::vector<std::int32_t> dict_to_canon(col.dict.size());
            for (std::size_t i = 0; i < col.dict.size(); ++i)
                dict_to_canon[i] = remap.at(col.dict[i]);
            auto& codes = view.nominal[c];
            codes.reserve(view.rows);
            for (std::size_t r = 0; r < view.rows; ++r) {
                codes.push_back(col.codes[r] < 0
                                    ? kMissingCode
                                    : dict_to_canon[static_cast<std::size_t>(col.codes[r])]);
            }
        } else {
            view.numeric[c] = &col.numbers;
        }
        view.schemas.push_back(std::move(schema));
    }
    return view;
}

EncodedTable encode_for_model(const Model& model, const FeatureTable& table) {
    EncodedTable data;
    data.rows = table.row_count;
    data.nominal.resize(model.features.size());
    data.numeric.assign(model.features.size(), nullptr);
    for (std::size_t f = 0; f < model.features.size(); ++f) {
        const FeatureSchema& schema = model.features[f];
        auto idx = table.column_index(schema.name);
        if (!idx) throw SchemaMismatchError("missing feature column: " + schema.name);
        const Column& col = table.columns[*idx];
        if (col.kind != schema.kind)
            throw SchemaMismatchError("feature kind mismatch: " + schema.name);
        if (schema.kind == ColumnKind::numeric) {
            data.numeric[f] = &col.numbers;
            continue;
        }
        std::unordered_map<std::string_view, std::int32_t> value_index;
        for (std::size_t i = 0; i < schema.values.size(); ++i)
            value_index.emplace(schema.values[i], static_cast<std::int32_t>(i));
        std::vector<std::int32_t> dict_map(col.dict.size());
        for (std::size_t i = 0; i < col.dict.size(); ++i) {
            auto it = value_index.find(col.dict[i]);
            dict_map[i] = it == value_index.end() ? kUnseenCode : it->second;
        }
        auto& codes = data.nominal[f];
        codes.reserve(data.rows);
        for (std::size_t r = 0; r < data.rows; ++r) {
            codes.push_back(col.codes[r] < 0
                                ? kMissingCode
                                : dict_map[static_cast<std::size_t>(col.codes[r])]);
        }
    }
    return data;
}

ClassDistribution predict(const Model& model, const EncodedTable& data, std::size_t row) {
    return model.predict_encoded(data, row);
}

std::size_t predicted_index(const ClassDistribution& dist) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < dist.probabilities.size(); ++i) {
        if (dist.probabilities[i] > dist.probabilities[best]) best = i;
    }
    return best;
}

nlohmann::json schemas_to_json(const std::vector<FeatureSchema>& schemas) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : schemas) {
        nlohmann::json j;
        j["name"] = s.name;
        j["kind"] = s.kind == ColumnKind::nominal ? "nominal" : "numeric";
        j["values"] = s.values;
        j["cuts"] = s.cuts;
        arr.push_back(std::move(j));
    }
    return arr;
}

std::vector<FeatureSchema> schemas_from_json(const nlohmann::json& j) {
    std::vector<FeatureSchema> schemas;
    for (const auto& item : j) {
        FeatureSchema s;
        s.name = item.at("name").get<std::string>();
        s.kind = item.at("kind").get<std::string>() == "numeric" ? ColumnKind::numeric
                                                                 : ColumnKind::nominal;
        s.values = item.at("values").get<std::vector<std::string>>();
        s.cuts = item.at("cuts").get<std::vector<double>>();
        schemas.push_back(std::move(s));
    }
    return schemas;
}

nlohmann::json model_to_json(const Model& model) {
    nlohmann::json j;
    j["format_version"] = "1";
    j["learner"] = std::string(to_string(model.kind));
    j["class_labels"] = model.class_labels;
    j["features"] = schemas_to_json(model.features);
    j["seed"] = model.train_seed;
    j["hyperparameters"] = model.hyperparameters;
    j["parameters"] = model.params_to_json();
    return j;
}

std::unique_ptr<Model> model_from_json(const nlohmann::json& j) {
    auto kind = learner_kind_from(j.at("learner").get<std::string>());
    if (!kind) throw SchemaMismatchError("unknown learner kind in model file");
    std::unique_ptr<Model> model;
    switch (*kind) {
        case LearnerKind::naive_bayes: model = std::make_unique<NaiveBayesModel>(); break;
        case LearnerKind::c45:
        case LearnerKind::random_forest:
        case LearnerKind::random_subspace:
            model = (*kind == LearnerKind::c45)
                        ? std::unique_ptr<Model>(std::make_unique<TreeModel>())
                        : std::unique_ptr<Model>(std::make_unique<EnsembleModel>());
            break;
        case LearnerKind::ripper: model = std::make_unique<RipperModel>(); break;
        case LearnerKind::decision_table: model = std::make_unique<DecisionTableModel>(); break;
        case LearnerKind::stacking: model = std::make_unique<StackingModel>(); break;
    }
    model->kind = *kind;
    model->class_labels = j.at("class_labels").get<std::vector<std::string>>();
    model->features = schemas_from_json(j.at("features"));
    model->train_seed = j.at("seed").get<std::uint64_t>();
    model->hyperparameters = j.at("hyperparameters");
    model->params_from_json(j.at("parameters"));
    return model;
}

double normal_inverse(double p) {
    // Acklam's rational approximation to the standard normal quantile.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p <= 0.0) return -1e9;
    if (p >= 1.0) return 1e9;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

double add_errs(double n, double observed_errors, double confidence) {
    // Expected additional errors on top of the observed count, at the given
    // one-sided confidence level (C4.5 pessimistic estimate).
    if (confidence > 0.5) confidence = 0.5;
    if (n <= 0.0) return 0.0;
    if (observed_errors < 1.0) {
        double base = n * (1.0 - std::pow(confidence, 1.0 / n));
        if (observed_errors == 0.0) return base;
        return base + observed_errors * (add_errs(n, 1.0, confidence) - base);
    }
    if (observed_errors + 0.5 >= n) return std::max(n - observed_errors, 0.0);
    double z = normal_inverse(1.0 - confidence);
    double f = (observed_errors + 0.5) / n;
    double r = (f + z * z / (2.0 * n) +
                z * std::sqrt(f / n - f * f / n + z * z / (4.0 * n * n))) /
               (1.0 + z * z / n);
    return r * n - observed_errors;
}

}  // namespace clicklab
