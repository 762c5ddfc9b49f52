#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "clicklab/feature_table.hpp"

namespace clicklab {

enum class LearnerKind {
    naive_bayes,
    c45,
    ripper,
    decision_table,
    random_forest,
    random_subspace,
    stacking,
};

std::string_view to_string(LearnerKind k);
std::optional<LearnerKind> learner_kind_from(std::string_view s);
const std::vector<LearnerKind>& all_learner_kinds();

// Training-time schema of one predictor. Nominal values are stored sorted so
// an artifact is independent of training row order. Learners that bin their
// numeric inputs keep the cut points here.
struct FeatureSchema {
    std::string name;
    ColumnKind kind = ColumnKind::nominal;
    std::vector<std::string> values;
    std::vector<double> cuts;
};

struct ClassDistribution {
    std::vector<double> probabilities;  // aligned with the model's class labels
};

// Canonically encoded training data: nominal codes refer to the sorted value
// dictionaries in `schemas`; class codes refer to sorted class labels.
struct TrainView {
    std::vector<FeatureSchema> schemas;
    std::vector<std::vector<std::int32_t>> nominal;      // per feature; empty if numeric
    std::vector<const std::vector<double>*> numeric;     // per feature; null if nominal
    std::vector<std::int32_t> class_codes;
    std::vector<std::string> class_labels;
    std::size_t rows = 0;

    std::size_t feature_count() const { return schemas.size(); }
};

TrainView make_train_view(const FeatureTable& table);

inline constexpr std::int32_t kMissingCode = -1;
inline constexpr std::int32_t kUnseenCode = -2;

// A table re-encoded against a model's schemas for batch prediction.
struct EncodedTable {
    std::vector<std::vector<std::int32_t>> nominal;   // per feature; empty if numeric
    std::vector<const std::vector<double>*> numeric;  // per feature; null if nominal
    std::size_t rows = 0;
};

class Model {
public:
    virtual ~Model() = default;

    LearnerKind kind;
    std::vector<std::string> class_labels;
    std::vector<FeatureSchema> features;
    std::uint64_t train_seed = 0;
    nlohmann::json hyperparameters = nlohmann::json::object();

    virtual ClassDistribution predict_encoded(const EncodedTable& data,
                                              std::size_t row) const = 0;
    virtual nlohmann::json params_to_json() const = 0;
    virtual void params_from_json(const nlohmann::json& j) = 0;
};

// Maps the table's dictionary codes onto the model's value indices; throws
// SchemaMismatch when a model feature is absent or typed differently.
EncodedTable encode_for_model(const Model& model, const FeatureTable& table);

ClassDistribution predict(const Model& model, const EncodedTable& data, std::size_t row);

// Hard label: argmax probability, ties resolved by class label order.
std::size_t predicted_index(const ClassDistribution& dist);

nlohmann::json model_to_json(const Model& model);
std::unique_ptr<Model> model_from_json(const nlohmann::json& j);

// Schema/feature helpers shared by the learner implementations.
nlohmann::json schemas_to_json(const std::vector<FeatureSchema>& schemas);
std::vector<FeatureSchema> schemas_from_json(const nlohmann::json& j);

// Upper confidence bound helpers for pessimistic error pruning.
double normal_inverse(double p);
double add_errs(double n, double observed_errors, double confidence);

}  // namespace clicklab
