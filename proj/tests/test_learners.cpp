#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>

#include "clicklab/errors.hpp"
#include "clicklab/eval.hpp"
#include "clicklab/learners/decision_table.hpp"
#include "clicklab/learners/ensemble.hpp"
#include "clicklab/learners/naive_bayes.hpp"
#include "clicklab/learners/ripper.hpp"
#include "clicklab/learners/tree.hpp"
#include "clicklab/learners/train.hpp"
#include "clicklab/rng.hpp"
#include "support/builders.hpp"

using namespace clicklab;

namespace {

double train_accuracy(const Model& model, const FeatureTable& table) {
    EncodedTable encoded = encode_for_model(model, table);
    auto labels = table.class_labels();
    std::size_t correct = 0;
    for (std::size_t r = 0; r < table.row_count; ++r) {
        auto dist = model.predict_encoded(encoded, r);
        if (model.class_labels[predicted_index(dist)] == table.class_column.text_at(r)) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(table.row_count);
}

FeatureTable planted_binary_table(std::size_t rows, double strength, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::string> labels(rows);
    std::vector<std::string> signal(rows);
    std::vector<std::string> noise(rows);
    std::vector<std::string> ids(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        labels[r] = rng.bernoulli(0.5) ? "late" : "early";
        signal[r] = rng.bernoulli(strength) ? "s_" + labels[r]
                                            : (rng.bernoulli(0.5) ? "s_early" : "s_late");
        noise[r] = "n" + std::to_string(rng.uniform_index(4));
        ids[r] = "id" + std::to_string(rng.uniform_index(rows / 3 + 1));
    }
    return builders::table_of({{"signal", signal}, {"noise", noise}, {"ids", ids}}, labels);
}

}  // namespace

// ---------------------------------------------------------------- NaiveBayes

TEST_CASE("naive bayes learns a dominant feature from two rows") {
    FeatureTable table =
        builders::table_of({{"f", {"a", "b"}}}, {"yes", "no"});
    LearnerConfig config{LearnerKind::naive_bayes, {}, 1};
    auto model = train_model(table, config);
    EncodedTable encoded = encode_for_model(*model, table);
    auto dist = model->predict_encoded(encoded, 0);
    std::size_t yes_index = model->class_labels[0] == "yes" ? 0 : 1;
    CHECK(dist.probabilities[yes_index] > 0.5);
}

TEST_CASE("naive bayes posteriors follow priors on an uninformative feature") {
    std::vector<std::string> labels;
    std::vector<std::string> values;
    for (int i = 0; i < 100; ++i) {
        labels.push_back(i < 60 ? "late" : "early");
        values.push_back("same");
    }
    FeatureTable table = builders::table_of({{"f", values}}, labels);
    auto model = train_model(table, {LearnerKind::naive_bayes, {}, 1});
    EncodedTable encoded = encode_for_model(*model, table);
    auto dist = model->predict_encoded(encoded, 0);
    // Hand computation with add-one smoothing over the feature's categories
    // (one value, the missing slot, and the unseen floor -> denominator +3):
    //   p(late)  ~ 61/102 * 61/63 = 0.579054
    //   p(early) ~ 41/102 * 41/43 = 0.383265
    //   posterior(late) = 0.579054 / 0.962319 = 0.601727
    std::size_t late_index = model->class_labels[0] == "late" ? 0 : 1;
    CHECK(dist.probabilities[late_index] == doctest::Approx(0.601727).epsilon(0.0005));
    CHECK(dist.probabilities[late_index] == doctest::Approx(0.6).epsilon(0.04));
}

TEST_CASE("naive bayes survives unseen categories and all-missing rows") {
    FeatureTable train = builders::table_of(
        {{"f", {"a", "a", "b", "b"}}}, {"yes", "yes", "no", "no"});
    auto model = train_model(train, {LearnerKind::naive_bayes, {}, 1});

    FeatureTable test;
    test.add_column(Column::nominal("f", {std::optional<std::string>("zzz"), std::nullopt}));
    test.set_class(builders::nominal_col("class", {"yes", "no"}));
    EncodedTable encoded = encode_for_model(*model, test);
    for (std::size_t r = 0; r < 2; ++r) {
        auto dist = model->predict_encoded(encoded, r);
        double sum = 0.0;
        for (double p : dist.probabilities) {
            CHECK(p >= 0.0);
            sum += p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

// ----------------------------------------------------------------------- C4.5

TEST_CASE("an unpruned tree shatters consistent data") {
    Rng rng(8);
    std::vector<std::string> f1(64), f2(64), labels(64);
    for (std::size_t r = 0; r < 64; ++r) {
        f1[r] = "a" + std::to_string(rng.uniform_index(4));
        f2[r] = "b" + std::to_string(rng.uniform_index(4));
        labels[r] = (f1[r] == "a1" || f2[r] == "b2") ? "yes" : "no";  // consistent rule
    }
    FeatureTable table = builders::table_of({{"f1", f1}, {"f2", f2}}, labels);
    auto model = train_model(
        table, {LearnerKind::c45, {{"prune", false}, {"min_leaf", 1}}, 1});
    CHECK(train_accuracy(*model, table) == doctest::Approx(1.0));
}

TEST_CASE("XOR needs exactly two levels") {
    FeatureTable table = builders::table_of(
        {{"a", {"0", "0", "1", "1"}}, {"b", {"0", "1", "0", "1"}}},
        {"no", "yes", "yes", "no"});
    auto model = train_model(
        table, {LearnerKind::c45, {{"prune", false}, {"min_leaf", 1}}, 1});
    CHECK(train_accuracy(*model, table) == doctest::Approx(1.0));
    auto* tree = dynamic_cast<TreeModel*>(model.get());
    REQUIRE(tree != nullptr);
    CHECK(tree->depth() == 2);
}

TEST_CASE("an overwhelmingly informative feature is the root split") {
    Rng rng(9);
    std::vector<std::string> strong(200), weak(200), labels(200);
    for (std::size_t r = 0; r < 200; ++r) {
        labels[r] = rng.bernoulli(0.5) ? "yes" : "no";
        strong[r] = "s_" + labels[r];
        weak[r] = rng.bernoulli(0.55) ? ("w_" + labels[r]) : "w_misc";
    }
    FeatureTable table = builders::table_of({{"weak", weak}, {"strong", strong}}, labels);
    auto model = train_model(table, {LearnerKind::c45, {}, 1});
    auto* tree = dynamic_cast<TreeModel*>(model.get());
    REQUIRE(tree != nullptr);
    REQUIRE(tree->nodes[0].feature >= 0);
    CHECK(tree->features[static_cast<std::size_t>(tree->nodes[0].feature)].name ==
          "strong");
}

TEST_CASE("pruning never increases training accuracy") {
    FeatureTable table = planted_binary_table(300, 0.6, 77);
    auto unpruned = train_model(
        table, {LearnerKind::c45, {{"prune", false}, {"min_leaf", 1}}, 1});
    auto pruned = train_model(table, {LearnerKind::c45, {}, 1});
    CHECK(train_accuracy(*unpruned, table) >= train_accuracy(*pruned, table) - 1e-12);
}

TEST_CASE("c45 handles numeric splits with missing values") {
    std::vector<std::optional<double>> values;
    std::vector<std::optional<std::string>> labels;
    Rng rng(123);
    for (int i = 0; i < 120; ++i) {
        if (i % 10 == 9) {
            values.push_back(std::nullopt);
        } else {
            values.push_back(static_cast<double>(i % 40));
        }
        labels.push_back((i % 40) < 20 ? "low" : "high");
    }
    FeatureTable table;
    table.add_column(Column::numeric("x", values));
    table.set_class(Column::nominal("class", labels));
    auto model = train_model(table, {LearnerKind::c45, {}, 1});
    CHECK(train_accuracy(*model, table) > 0.8);
}

// --------------------------------------------------------------------- RIPPER

TEST_CASE("ripper recovers a single separating rule") {
    // class = [color == red]; 4 red yes, 8 others no.
    std::vector<std::string> color = {"red",  "red",  "red",   "red",
                                      "blue", "blue", "blue",  "green",
                                      "green", "green", "blue", "green"};
    std::vector<std::string> size = {"s", "m", "l", "s", "m", "l",
                                     "s", "m", "l", "s", "m", "l"};
    std::vector<std::string> labels;
    for (const auto& c : color) labels.push_back(c == "red" ? "yes" : "no");
    FeatureTable table = builders::table_of({{"color", color}, {"size", size}}, labels);

    auto model = train_model(table, {LearnerKind::ripper, {}, 1});
    auto* ripper = dynamic_cast<RipperModel*>(model.get());
    REQUIRE(ripper != nullptr);
    REQUIRE(ripper->rules.size() == 1);
    REQUIRE(ripper->rules[0].conditions.size() == 1);
    const RuleCondition& cond = ripper->rules[0].conditions[0];
    CHECK(ripper->features[static_cast<std::size_t>(cond.feature)].name == "color");
    CHECK(ripper->features[static_cast<std::size_t>(cond.feature)]
              .values[static_cast<std::size_t>(cond.value)] == "red");
    CHECK(ripper->class_labels[static_cast<std::size_t>(ripper->default_class)] == "no");
    CHECK(train_accuracy(*model, table) == doctest::Approx(1.0));
}

TEST_CASE("a pure table yields only the default rule") {
    std::vector<std::string> f = {"a", "b", "a", "b"};
    std::vector<std::string> labels(4, "only");
    FeatureTable table = builders::table_of({{"f", f}}, labels);
    auto model = train_model(table, {LearnerKind::ripper, {}, 1});
    auto* ripper = dynamic_cast<RipperModel*>(model.get());
    REQUIRE(ripper != nullptr);
    CHECK(ripper->rules.empty());
    EncodedTable encoded = encode_for_model(*model, table);
    auto dist = model->predict_encoded(encoded, 0);
    CHECK(model->class_labels[predicted_index(dist)] == "only");
}

TEST_CASE("ripper scales subquadratically") {
    auto time_train = [](std::size_t rows) {
        FeatureTable table = planted_binary_table(rows, 0.7, 55);
        auto start = std::chrono::steady_clock::now();
        auto model = train_model(table, {LearnerKind::ripper, {}, 1});
        (void)model;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    };
    double t1 = time_train(4000);
    double t2 = time_train(16000);
    // A quadratic learner would slow down ~16x over a 4x size increase.
    CHECK(t2 / std::max(t1, 1e-6) < 12.0);
}

// -------------------------------------------------------------- DecisionTable

TEST_CASE("decision table selects the single predictive feature") {
    Rng rng(21);
    std::vector<std::string> good(160), bad(160), labels(160);
    for (std::size_t r = 0; r < 160; ++r) {
        labels[r] = rng.bernoulli(0.5) ? "yes" : "no";
        good[r] = "g_" + labels[r];
        bad[r] = "b" + std::to_string(rng.uniform_index(4));
    }
    FeatureTable table = builders::table_of({{"bad", bad}, {"good", good}}, labels);
    auto model = train_model(table, {LearnerKind::decision_table, {}, 1});
    auto* dt = dynamic_cast<DecisionTableModel*>(model.get());
    REQUIRE(dt != nullptr);
    REQUIRE(dt->selected.size() == 1);
    CHECK(dt->features[dt->selected[0]].name == "good");
}

TEST_CASE("decision table lookup misses fall back to the global majority") {
    FeatureTable table = builders::table_of(
        {{"f", {"a", "a", "a", "b", "b", "c", "c", "c", "c", "c"}}},
        {"yes", "yes", "yes", "no", "no", "no", "no", "no", "no", "no"});
    auto model = train_model(table, {LearnerKind::decision_table, {}, 1});

    FeatureTable unseen;
    unseen.add_column(builders::nominal_col("f", {"zzz"}));
    unseen.set_class(builders::nominal_col("class", {"no"}));
    EncodedTable encoded = encode_for_model(*model, unseen);
    auto dist = model->predict_encoded(encoded, 0);
    CHECK(model->class_labels[predicted_index(dist)] == "no");
}

TEST_CASE("an uninformative table degenerates to the majority predictor") {
    std::vector<std::string> f(40, "same");
    std::vector<std::string> labels;
    for (int i = 0; i < 40; ++i) labels.push_back(i < 26 ? "no" : "yes");
    FeatureTable table = builders::table_of({{"f", f}}, labels);
    auto model = train_model(table, {LearnerKind::decision_table, {}, 1});
    auto* dt = dynamic_cast<DecisionTableModel*>(model.get());
    REQUIRE(dt != nullptr);
    CHECK(dt->selected.empty());
    EncodedTable encoded = encode_for_model(*model, table);
    CHECK(model->class_labels[predicted_index(model->predict_encoded(encoded, 0))] ==
          "no");
}

// ------------------------------------------------------------------ Ensembles

TEST_CASE("random forests are reproducible and beat the baseline on signal") {
    FeatureTable table = planted_binary_table(600, 0.8, 91);
    LearnerConfig config{LearnerKind::random_forest, {{"n_trees", 20}}, 33};
    auto a = train_model(table, config);
    auto b = train_model(table, config);
    CHECK(model_to_json(*a).dump() == model_to_json(*b).dump());

    EvalReport report = cross_validate(config, table, 5, 17);
    CHECK(report.accuracy > 0.6);
}

TEST_CASE("a one-tree forest with full candidates is a single tree on a bootstrap") {
    FeatureTable table = planted_binary_table(200, 0.7, 131);
    TrainView view = make_train_view(table);
    auto forest = train_model(
        table,
        {LearnerKind::random_forest,
         {{"n_trees", 1}, {"candidate_features", static_cast<int>(view.feature_count())}},
         8});

    // Replicate the member's stream: bootstrap rows, then an unpruned tree.
    Rng rng(derive_seed(8, "forest_tree", 0));
    std::vector<std::size_t> bootstrap(view.rows);
    for (auto& r : bootstrap) r = rng.uniform_index(view.rows);
    std::sort(bootstrap.begin(), bootstrap.end());
    TreeConfig tree_config;
    tree_config.min_leaf = 1;
    tree_config.prune = false;
    tree_config.random_candidates = static_cast<int>(view.feature_count());
    auto tree = build_tree(view, bootstrap, tree_config, rng, 8);

    EncodedTable ensemble_encoded = encode_for_model(*forest, table);
    EncodedTable tree_encoded = encode_for_model(*tree, table);
    for (std::size_t r = 0; r < table.row_count; ++r) {
        auto da = forest->predict_encoded(ensemble_encoded, r);
        auto db = tree->predict_encoded(tree_encoded, r);
        for (std::size_t c = 0; c < da.probabilities.size(); ++c) {
            CHECK(da.probabilities[c] == doctest::Approx(db.probabilities[c]).epsilon(1e-12));
        }
    }
}

TEST_CASE("the stacking meta layer sees bases x classes probability columns") {
    FeatureTable table = planted_binary_table(120, 0.8, 61);
    LearnerConfig config{
        LearnerKind::stacking,
        {{"bases",
          {{{"n_members", 2}, {"subspace_fraction", 0.5}},
           {{"n_members", 3}, {"subspace_fraction", 1.0}}}},
         {"internal_folds", 4}},
        2};
    auto model = train_model(table, config);
    auto* stacked = dynamic_cast<StackingModel*>(model.get());
    REQUIRE(stacked != nullptr);
    CHECK(stacked->bases.size() == 2);
    CHECK(stacked->meta->features.size() == 2 * 2);  // n_bases * n_classes
}

TEST_CASE("predicting against a mismatched schema fails loudly") {
    FeatureTable table = planted_binary_table(50, 0.7, 3);
    auto model = train_model(table, {LearnerKind::naive_bayes, {}, 1});
    FeatureTable other = builders::table_of({{"unrelated", {"a", "b"}}}, {"x", "y"});
    CHECK_THROWS_AS(encode_for_model(*model, other), SchemaMismatchError);
}

TEST_CASE("a one-member full-subspace ensemble equals its base tree") {
    FeatureTable table = planted_binary_table(200, 0.7, 13);
    auto ensemble = train_model(
        table,
        {LearnerKind::random_subspace, {{"n_members", 1}, {"subspace_fraction", 1.0}}, 5});
    TreeConfig tree_config;
    tree_config.min_leaf = 2;
    tree_config.prune = true;
    TrainView view = make_train_view(table);
    Rng rng(derive_seed(5, "subspace_member", 0));
    std::vector<std::size_t> all(view.feature_count());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    rng.shuffle(all);  // consume the same stream the ensemble used
    std::vector<std::size_t> rows(view.rows);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    tree_config.feature_subset.assign(all.begin(), all.end());
    auto tree = build_tree(view, rows, tree_config, rng, 5);

    EncodedTable encoded = encode_for_model(*ensemble, table);
    EncodedTable tree_encoded = encode_for_model(*tree, table);
    for (std::size_t r = 0; r < table.row_count; ++r) {
        auto da = ensemble->predict_encoded(encoded, r);
        auto db = tree->predict_encoded(tree_encoded, r);
        for (std::size_t c = 0; c < da.probabilities.size(); ++c) {
            CHECK(da.probabilities[c] == doctest::Approx(db.probabilities[c]).epsilon(1e-12));
        }
    }
}

TEST_CASE("subspace members see exactly the configured feature count") {
    Rng rng(3);
    std::vector<std::pair<std::string, std::vector<std::string>>> features;
    std::vector<std::string> labels(80);
    for (auto& l : labels) l = rng.bernoulli(0.5) ? "a" : "b";
    for (int f = 0; f < 12; ++f) {
        std::vector<std::string> values(80);
        for (auto& v : values) v = "v" + std::to_string(rng.uniform_index(3));
        features.emplace_back("f" + std::to_string(f), values);
    }
    FeatureTable table = builders::table_of(features, labels);
    auto model = train_model(
        table,
        {LearnerKind::random_subspace, {{"n_members", 6}, {"subspace_fraction", 0.5}}, 9});
    auto* ensemble = dynamic_cast<EnsembleModel*>(model.get());
    REQUIRE(ensemble != nullptr);
    REQUIRE(ensemble->member_features.size() == 6);
    bool any_different = false;
    for (const auto& subset : ensemble->member_features) {
        CHECK(subset.size() == 6);  // ceil(0.5 * 12)
        if (subset != ensemble->member_features[0]) any_different = true;
    }
    CHECK(any_different);
}

TEST_CASE("stacking beats the coin-flip baseline on planted signal") {
    FeatureTable table = planted_binary_table(400, 0.85, 27);
    LearnerConfig config{
        LearnerKind::stacking,
        {{"bases", {{{"n_members", 5}, {"subspace_fraction", 0.6}}}}, {"internal_folds", 5}},
        3};
    EvalReport report = cross_validate(config, table, 5, 19);
    CHECK(report.accuracy > 0.5);
    CHECK(report.auroc > 0.5);
}

// ------------------------------------------------------------------ contracts

TEST_CASE("every learner emits normalized distributions and reloads exactly") {
    FeatureTable table = planted_binary_table(150, 0.7, 47);
    for (LearnerKind kind : all_learner_kinds()) {
        LearnerConfig config{kind, {}, 11};
        if (kind == LearnerKind::random_forest) config.hyper = {{"n_trees", 5}};
        if (kind == LearnerKind::stacking) {
            config.hyper = {{"bases", {{{"n_members", 3}, {"subspace_fraction", 0.5}}}},
                            {"internal_folds", 4}};
        }
        auto model = train_model(table, config);
        EncodedTable encoded = encode_for_model(*model, table);

        auto json = model_to_json(*model);
        auto reloaded = model_from_json(json);
        EncodedTable encoded2 = encode_for_model(*reloaded, table);

        for (std::size_t r = 0; r < 25; ++r) {
            auto dist = model->predict_encoded(encoded, r);
            double sum = 0.0;
            for (double p : dist.probabilities) {
                CHECK(p >= 0.0);
                CHECK(p <= 1.0 + 1e-9);
                sum += p;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

            auto dist2 = reloaded->predict_encoded(encoded2, r);
            for (std::size_t c = 0; c < dist.probabilities.size(); ++c) {
                CHECK(dist.probabilities[c] ==
                      doctest::Approx(dist2.probabilities[c]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("training is deterministic for every learner") {
    FeatureTable table = planted_binary_table(150, 0.6, 66);
    for (LearnerKind kind : all_learner_kinds()) {
        LearnerConfig config{kind, {}, 21};
        if (kind == LearnerKind::random_forest) config.hyper = {{"n_trees", 5}};
        if (kind == LearnerKind::stacking) {
            config.hyper = {{"bases", {{{"n_members", 3}, {"subspace_fraction", 0.5}}}},
                            {"internal_folds", 4}};
        }
        auto a = train_model(table, config);
        auto b = train_model(table, config);
        CHECK(model_to_json(*a).dump() == model_to_json(*b).dump());
    }
}

TEST_CASE("row order does not change order-free learners") {
    FeatureTable table = planted_binary_table(120, 0.7, 31);
    std::vector<std::size_t> permuted(table.row_count);
    for (std::size_t i = 0; i < permuted.size(); ++i) permuted[i] = i;
    Rng rng(2);
    rng.shuffle(permuted);
    FeatureTable shuffled = table.select_rows(permuted);

    for (LearnerKind kind :
         {LearnerKind::naive_bayes, LearnerKind::c45, LearnerKind::decision_table}) {
        LearnerConfig config{kind, {}, 1};
        auto a = train_model(table, config);
        auto b = train_model(shuffled, config);
        CHECK(model_to_json(*a).dump() == model_to_json(*b).dump());
    }
}
