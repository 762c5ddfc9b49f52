#pragma once

#include "clicklab/learners/model.hpp"

namespace clicklab {

// One learner invocation: kind, hyperparameters (defaults filled in for
// anything unspecified), and the training seed.
struct LearnerConfig {
    LearnerKind kind = LearnerKind::naive_bayes;
    nlohmann::json hyper = nlohmann::json::object();
    std::uint64_t seed = 1;
};

nlohmann::json default_hyperparameters(LearnerKind kind);

std::unique_ptr<Model> train_model(const FeatureTable& table, const LearnerConfig& config);

}  // namespace clicklab
