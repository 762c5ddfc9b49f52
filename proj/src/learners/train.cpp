#include "clicklab/learners/train.hpp"

#include "clicklab/errors.hpp"
#include "clicklab/learners/decision_table.hpp"
#include "clicklab/learners/ensemble.hpp"
#include "clicklab/learners/naive_bayes.hpp"
#include "clicklab/learners/ripper.hpp"
#include "clicklab/learners/tree.hpp"

namespace clicklab {

nlohmann::json default_hyperparameters(LearnerKind kind) {
    switch (kind) {
        case LearnerKind::naive_bayes:
            return nlohmann::json::object();
        case LearnerKind::c45:
            return {{"min_leaf", 2}, {"prune", true}, {"prune_confidence", 0.25}};
        case LearnerKind::ripper:
            return {{"optimization_runs", 2}};
        case LearnerKind::decision_table:
            return {{"max_stale", 5}};
        case LearnerKind::random_forest:
            return {{"n_trees", 100}, {"candidate_features", 0}};
        case LearnerKind::random_subspace:
            return {{"n_members", 10}, {"subspace_fraction", 0.5}};
        case LearnerKind::stacking:
            return {{"bases", {{{"n_members", 10}, {"subspace_fraction", 0.5}}}},
                    {"internal_folds", 10},
                    {"meta", "naive_bayes"}};
    }
    return nlohmann::json::object();
}

namespace {

nlohmann::json merged_hyper(const LearnerConfig& config) {
    nlohmann::json hyper = default_hyperparameters(config.kind);
    for (const auto& [key, value] : config.hyper.items()) hyper[key] = value;
    return hyper;
}

}  // namespace

std::unique_ptr<Model> train_model(const FeatureTable& table, const LearnerConfig& config) {
    if (table.row_count == 0) throw EmptyTableError();
    TrainView view = make_train_view(table);
    nlohmann::json hyper = merged_hyper(config);

    switch (config.kind) {
        case LearnerKind::naive_bayes: {
            auto model = train_naive_bayes(view, config.seed);
            model->hyperparameters = hyper;
            return model;
        }
        case LearnerKind::c45: {
            TreeConfig tree;
            tree.min_leaf = hyper.at("min_leaf").get<int>();
            tree.prune = hyper.at("prune").get<bool>();
            tree.prune_confidence = hyper.at("prune_confidence").get<double>();
            auto model = train_c45(view, tree, config.seed);
            model->hyperparameters = hyper;
            return model;
        }
        case LearnerKind::ripper: {
            RipperConfig rc;
            rc.optimization_runs = hyper.at("optimization_runs").get<int>();
            auto model = train_ripper(view, rc, config.seed);
            model->hyperparameters = hyper;
            return model;
        }
        case LearnerKind::decision_table: {
            DecisionTableConfig dc;
            dc.max_stale = hyper.at("max_stale").get<int>();
            auto model = train_decision_table(view, dc, config.seed);
            model->hyperparameters = hyper;
            return model;
        }
        case LearnerKind::random_forest: {
            RandomForestConfig fc;
            fc.n_trees = hyper.at("n_trees").get<int>();
            fc.candidate_features = hyper.at("candidate_features").get<int>();
            auto model = train_random_forest(view, fc, config.seed);
            model->hyperparameters = hyper;
            return model;
        }
        case LearnerKind::random_subspace: {
            RandomSubspaceConfig sc;
            sc.n_members = hyper.at("n_members").get<int>();
            sc.subspace_fraction = hyper.at("subspace_fraction").get<double>();
            auto model = train_random_subspace(view, sc, config.seed);
            model->hyperparameters = hyper;
            return model;
        }
        case LearnerKind::stacking: {
            StackingConfig st;
            st.bases.clear();
            for (const auto& b : hyper.at("bases")) {
                RandomSubspaceConfig sc;
                sc.n_members = b.at("n_members").get<int>();
                sc.subspace_fraction = b.at("subspace_fraction").get<double>();
                st.bases.push_back(sc);
            }
            st.internal_folds = hyper.at("internal_folds").get<int>();
            auto model = train_stacking(view, table, st, config.seed);
            model->hyperparameters = hyper;
            return model;
        }
    }
    throw InvalidConfigError("unknown learner kind");
}

}  // namespace clicklab
