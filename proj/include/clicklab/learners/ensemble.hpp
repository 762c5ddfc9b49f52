#pragma once

#include "clicklab/learners/naive_bayes.hpp"
#include "clicklab/learners/tree.hpp"

namespace clicklab {

// Tree ensemble covering both the bootstrap/random-candidate forest and the
// random-subspace method; members' posteriors are averaged.
class EnsembleModel : public Model {
public:
    std::vector<std::unique_ptr<TreeModel>> members;
    std::vector<std::vector<std::size_t>> member_features;  // empty = all

    ClassDistribution predict_encoded(const EncodedTable& data,
                                      std::size_t row) const override;
    nlohmann::json params_to_json() const override;
    void params_from_json(const nlohmann::json& j) override;
};

struct RandomForestConfig {
    int n_trees = 100;
    int candidate_features = 0;  // per split; 0 = floor(sqrt(M))
};

struct RandomSubspaceConfig {
    int n_members = 10;
    double subspace_fraction = 0.5;
};

std::unique_ptr<EnsembleModel> train_random_forest(const TrainView& view,
                                                   const RandomForestConfig& config,
                                                   std::uint64_t seed);

std::unique_ptr<EnsembleModel> train_random_subspace(const TrainView& view,
                                                     const RandomSubspaceConfig& config,
                                                     std::uint64_t seed);

// Two-level scheme: random-subspace ensembles feed per-class out-of-fold
// probabilities to a naive Bayes meta-learner.
class StackingModel : public Model {
public:
    std::vector<std::unique_ptr<EnsembleModel>> bases;
    std::unique_ptr<NaiveBayesModel> meta;

    ClassDistribution predict_encoded(const EncodedTable& data,
                                      std::size_t row) const override;
    nlohmann::json params_to_json() const override;
    void params_from_json(const nlohmann::json& j) override;
};

struct StackingConfig {
    std::vector<RandomSubspaceConfig> bases{{10, 0.5}};
    int internal_folds = 10;
};

std::unique_ptr<StackingModel> train_stacking(const TrainView& view,
                                              const FeatureTable& table,
                                              const StackingConfig& config,
                                              std::uint64_t seed);

}  // namespace clicklab
