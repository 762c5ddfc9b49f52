#include "clicklab/learners/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "clicklab/errors.hpp"
#include "clicklab/folds.hpp"

namespace clicklab {

namespace {

// View of the canonical training encoding as a prediction table.
EncodedTable encode_view(const TrainView& view) {
    EncodedTable data;
    data.rows = view.rows;
    data.nominal = view.nominal;
    data.numeric = view.numeric;
    return data;
}

std::unique_ptr<EnsembleModel> make_ensemble(const TrainView& view, LearnerKind kind,
                                             std::uint64_t seed) {
    auto model = std::make_unique<EnsembleModel>();
    model->kind = kind;
    model->class_labels = view.class_labels;
    model->features = view.schemas;
    model->train_seed = seed;
    return model;
}

std::unique_ptr<EnsembleModel> train_random_subspace_rows(
    const TrainView& view, const std::vector<std::size_t>& rows,
    const RandomSubspaceConfig& config, std::uint64_t seed) {
    if (config.n_members < 1) throw InvalidConfigError("n_members must be >= 1");
    if (config.subspace_fraction <= 0.0 || config.subspace_fraction > 1.0)
        throw InvalidConfigError("subspace_fraction must be in (0, 1]");

    auto model = make_ensemble(view, LearnerKind::random_subspace, seed);
    model->hyperparameters = {{"n_members", config.n_members},
                              {"subspace_fraction", config.subspace_fraction}};

    const std::size_t m = view.feature_count();
    const auto subspace_size = static_cast<std::size_t>(
        std::ceil(config.subspace_fraction * static_cast<double>(m) - 1e-9));

    for (int i = 0; i < config.n_members; ++i) {
        Rng rng(derive_seed(seed, "subspace_member", static_cast<std::uint64_t>(i)));
        std::vector<std::size_t> all(m);
        for (std::size_t f = 0; f < m; ++f) all[f] = f;
        rng.shuffle(all);
        std::vector<std::size_t> subset(all.begin(),
                                        all.begin() + static_cast<long>(std::max<std::size_t>(
                                                          1, std::min(subspace_size, m))));
        std::sort(subset.begin(), subset.end());

        TreeConfig tree_config;
        tree_config.min_leaf = 2;
        tree_config.prune = true;  // members are ordinary pruned trees
        tree_config.feature_subset = subset;
        auto tree = build_tree(view, rows, tree_config, rng, seed);
        model->member_features.push_back(std::move(subset));
        model->members.push_back(std::move(tree));
    }
    return model;
}

}  // namespace

std::unique_ptr<EnsembleModel> train_random_forest(const TrainView& view,
                                                   const RandomForestConfig& config,
                                                   std::uint64_t seed) {
    if (config.n_trees < 1) throw InvalidConfigError("n_trees must be >= 1");
    if (view.rows == 0) throw EmptyTableError();

    auto model = make_ensemble(view, LearnerKind::random_forest, seed);
    model->hyperparameters = {{"n_trees", config.n_trees},
                              {"candidate_features", config.candidate_features}};

    const std::size_t m = view.feature_count();
    const int candidates =
        config.candidate_features > 0
            ? config.candidate_features
            : std::max(1, static_cast<int>(std::lround(
                              std::floor(std::sqrt(static_cast<double>(m))))));

    for (int i = 0; i < config.n_trees; ++i) {
        Rng rng(derive_seed(seed, "forest_tree", static_cast<std::uint64_t>(i)));
        std::vector<std::size_t> bootstrap(view.rows);
        for (auto& r : bootstrap) r = rng.uniform_index(view.rows);
        std::sort(bootstrap.begin(), bootstrap.end());

        TreeConfig tree_config;
        tree_config.min_leaf = 1;
        tree_config.prune = false;
        tree_config.random_candidates = candidates;
        auto tree = build_tree(view, bootstrap, tree_config, rng, seed);
        model->member_features.emplace_back();  // all features available
        model->members.push_back(std::move(tree));
    }
    return model;
}

std::unique_ptr<EnsembleModel> train_random_subspace(const TrainView& view,
                                                     const RandomSubspaceConfig& config,
                                                     std::uint64_t seed) {
    if (view.rows == 0) throw EmptyTableError();
    std::vector<std::size_t> rows(view.rows);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return train_random_subspace_rows(view, rows, config, seed);
}

ClassDistribution EnsembleModel::predict_encoded(const EncodedTable& data,
                                                 std::size_t row) const {
    ClassDistribution dist;
    dist.probabilities.assign(class_labels.size(), 0.0);
    for (const auto& member : members) {
        ClassDistribution d = member->predict_encoded(data, row);
        for (std::size_t c = 0; c < dist.probabilities.size(); ++c) {
            dist.probabilities[c] += d.probabilities[c];
        }
    }
    double denom = static_cast<double>(members.size());
    for (auto& p : dist.probabilities) p /= denom;
    return dist;
}

nlohmann::json EnsembleModel::params_to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < members.size(); ++i) {
        arr.push_back({{"features", member_features[i]},
                       {"tree", members[i]->params_to_json()}});
    }
    return nlohmann::json{{"members", std::move(arr)}};
}

void EnsembleModel::params_from_json(const nlohmann::json& j) {
    members.clear();
    member_features.clear();
    for (const auto& item : j.at("members")) {
        member_features.push_back(item.at("features").get<std::vector<std::size_t>>());
        auto tree = std::make_unique<TreeModel>();
        tree->kind = LearnerKind::c45;
        tree->class_labels = class_labels;
        tree->features = features;
        tree->train_seed = train_seed;
        tree->params_from_json(item.at("tree"));
        members.push_back(std::move(tree));
    }
}

namespace {

std::vector<std::string> meta_feature_names(std::size_t n_bases,
                                            const std::vector<std::string>& labels) {
    std::vector<std::string> names;
    for (std::size_t b = 0; b < n_bases; ++b) {
        for (const auto& label : labels) {
            names.push_back("base" + std::to_string(b) + "_p_" + label);
        }
    }
    return names;
}

}  // namespace

std::unique_ptr<StackingModel> train_stacking(const TrainView& view,
                                              const FeatureTable& table,
                                              const StackingConfig& config,
                                              std::uint64_t seed) {
    if (view.rows == 0) throw EmptyTableError();
    if (config.bases.empty()) throw InvalidConfigError("stacking needs at least one base");

    auto model = std::make_unique<StackingModel>();
    model->kind = LearnerKind::stacking;
    model->class_labels = view.class_labels;
    model->features = view.schemas;
    model->train_seed = seed;
    nlohmann::json base_spec = nlohmann::json::array();
    for (const auto& b : config.bases) {
        base_spec.push_back({{"n_members", b.n_members},
                             {"subspace_fraction", b.subspace_fraction}});
    }
    model->hyperparameters = {{"bases", std::move(base_spec)},
                              {"internal_folds", config.internal_folds},
                              {"meta", "naive_bayes"}};

    const std::size_t n_classes = view.class_labels.size();
    const std::size_t n_bases = config.bases.size();

    // Level-1 matrix: out-of-fold class probabilities from every base.
    std::size_t folds = static_cast<std::size_t>(std::max(2, config.internal_folds));
    if (folds > view.rows) folds = view.rows;
    std::vector<std::vector<double>> meta_matrix(
        n_bases * n_classes, std::vector<double>(view.rows, 0.0));

    FoldAssignment assignment =
        stratified_folds_codes(view.class_codes, folds, derive_seed(seed, "stacking_folds"));
    EncodedTable full = encode_view(view);

    for (std::size_t fold = 0; fold < folds; ++fold) {
        std::vector<std::size_t> train_rows = assignment.rows_not_in_fold(fold);
        std::vector<std::size_t> test_rows = assignment.rows_in_fold(fold);
        if (train_rows.empty() || test_rows.empty()) continue;
        for (std::size_t b = 0; b < n_bases; ++b) {
            auto base = train_random_subspace_rows(
                view, train_rows, config.bases[b],
                derive_seed(seed, "stacking_fold_base", fold * 1000 + b));
            for (std::size_t r : test_rows) {
                ClassDistribution d = base->predict_encoded(full, r);
                for (std::size_t c = 0; c < n_classes; ++c) {
                    meta_matrix[b * n_classes + c][r] = d.probabilities[c];
                }
            }
        }
    }

    // Meta learner: naive Bayes over the level-1 probabilities.
    FeatureTable meta_table;
    std::vector<std::string> names = meta_feature_names(n_bases, view.class_labels);
    for (std::size_t f = 0; f < meta_matrix.size(); ++f) {
        Column col;
        col.name = names[f];
        col.kind = ColumnKind::numeric;
        col.numbers = std::move(meta_matrix[f]);
        meta_table.add_column(std::move(col));
    }
    meta_table.set_class(table.class_column);
    TrainView meta_view = make_train_view(meta_table);
    model->meta = train_naive_bayes(meta_view, derive_seed(seed, "stacking_meta"));

    // Final bases retrained on the full data.
    std::vector<std::size_t> all_rows(view.rows);
    for (std::size_t i = 0; i < all_rows.size(); ++i) all_rows[i] = i;
    for (std::size_t b = 0; b < n_bases; ++b) {
        model->bases.push_back(train_random_subspace_rows(
            view, all_rows, config.bases[b], derive_seed(seed, "stacking_base", b)));
    }
    return model;
}

ClassDistribution StackingModel::predict_encoded(const EncodedTable& data,
                                                 std::size_t row) const {
    const std::size_t n_classes = class_labels.size();
    std::vector<double> meta_row;
    meta_row.reserve(bases.size() * n_classes);
    for (const auto& base : bases) {
        ClassDistribution d = base->predict_encoded(data, row);
        for (std::size_t c = 0; c < n_classes; ++c) meta_row.push_back(d.probabilities[c]);
    }
    return meta->predict_numeric_row(meta_row);
}

nlohmann::json StackingModel::params_to_json() const {
    nlohmann::json base_arr = nlohmann::json::array();
    for (const auto& base : bases) {
        base_arr.push_back({{"hyperparameters", base->hyperparameters},
                            {"parameters", base->params_to_json()}});
    }
    nlohmann::json meta_json;
    meta_json["features"] = schemas_to_json(meta->features);
    meta_json["parameters"] = meta->params_to_json();
    return nlohmann::json{{"bases", std::move(base_arr)},
                          {"meta", std::move(meta_json)}};
}

void StackingModel::params_from_json(const nlohmann::json& j) {
    bases.clear();
    for (const auto& item : j.at("bases")) {
        auto base = std::make_unique<EnsembleModel>();
        base->kind = LearnerKind::random_subspace;
        base->class_labels = class_labels;
        base->features = features;
        base->train_seed = train_seed;
        base->hyperparameters = item.at("hyperparameters");
        base->params_from_json(item.at("parameters"));
        bases.push_back(std::move(base));
    }
    meta = std::make_unique<NaiveBayesModel>();
    meta->kind = LearnerKind::naive_bayes;
    meta->class_labels = class_labels;
    meta->features = schemas_from_json(j.at("meta").at("features"));
    meta->train_seed = train_seed;
    meta->params_from_json(j.at("meta").at("parameters"));
}

}  // namespace clicklab
