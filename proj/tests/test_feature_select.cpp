#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "clicklab/errors.hpp"
#include "clicklab/feature_select.hpp"
#include "clicklab/rng.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace clicklab;

namespace {

// (feature, class) code pairs for a 2x2 layout given the four cell counts.
void fill_counts(std::vector<std::int32_t>& f, std::vector<std::int32_t>& c,
                 int c00, int c01, int c10, int c11) {
    f.clear();
    c.clear();
    auto add = [&](int count, std::int32_t fv, std::int32_t cv) {
        for (int i = 0; i < count; ++i) {
            f.push_back(fv);
            c.push_back(cv);
        }
    };
    add(c00, 0, 0);
    add(c01, 0, 1);
    add(c10, 1, 0);
    add(c11, 1, 1);
}

constexpr double kEntropy075 = 0.8112781244591328;  // H(0.75) in bits

}  // namespace

TEST_CASE("chi squared on frozen contingency tables") {
    std::vector<std::int32_t> f, c;
    fill_counts(f, c, 5, 5, 5, 5);  // independent
    CHECK(chi_squared(f, c) == doctest::Approx(0.0).epsilon(1e-12));

    fill_counts(f, c, 10, 0, 0, 10);  // perfect association, N=20
    CHECK(chi_squared(f, c) == doctest::Approx(20.0).epsilon(1e-12));

    fill_counts(f, c, 7, 13, 0, 0);  // constant feature
    CHECK(chi_squared(f, c) == doctest::Approx(0.0));
}

TEST_CASE("info gain on frozen fixtures") {
    std::vector<std::int32_t> f, c;
    fill_counts(f, c, 10, 0, 0, 10);  // feature identical to balanced class
    CHECK(info_gain(f, c) == doctest::Approx(1.0).epsilon(1e-12));

    fill_counts(f, c, 7, 13, 0, 0);
    CHECK(info_gain(f, c) == doctest::Approx(0.0));

    fill_counts(f, c, 6, 2, 2, 6);  // balanced 8/8 class, (6,2)/(2,6) split
    CHECK(info_gain(f, c) == doctest::Approx(1.0 - kEntropy075).epsilon(1e-12));
}

TEST_CASE("gain ratio on frozen fixtures") {
    std::vector<std::int32_t> f, c;
    fill_counts(f, c, 10, 0, 0, 10);
    CHECK(gain_ratio(f, c) == doctest::Approx(1.0).epsilon(1e-12));

    fill_counts(f, c, 7, 13, 0, 0);
    CHECK(gain_ratio(f, c) == doctest::Approx(0.0));

    // Unique-per-row key, 4 rows, balanced class: IG 1 bit, SplitInfo 2 bits.
    std::vector<std::int32_t> key = {0, 1, 2, 3};
    std::vector<std::int32_t> cls = {0, 0, 1, 1};
    CHECK(info_gain(key, cls) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gain_ratio(key, cls) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("one_r on frozen fixtures") {
    std::vector<std::int32_t> f, c;
    std::vector<std::string> classes = {"a", "b"};
    fill_counts(f, c, 10, 0, 0, 10);
    CHECK(one_r(f, c, classes) == doctest::Approx(1.0));

    fill_counts(f, c, 12, 8, 0, 0);  // constant feature, 60/40 class split
    CHECK(one_r(f, c, classes) == doctest::Approx(0.6));

    fill_counts(f, c, 6, 2, 2, 6);
    CHECK(one_r(f, c, classes) == doctest::Approx(0.75));
}

TEST_CASE("symmetric uncertainty on frozen fixtures") {
    std::vector<std::int32_t> f, c;
    fill_counts(f, c, 10, 0, 0, 10);
    CHECK(symmetric_uncertainty(f, c) == doctest::Approx(1.0).epsilon(1e-12));

    fill_counts(f, c, 5, 5, 5, 5);
    CHECK(symmetric_uncertainty(f, c) == doctest::Approx(0.0));

    fill_counts(f, c, 6, 2, 2, 6);
    CHECK(symmetric_uncertainty(f, c) ==
          doctest::Approx(2.0 * (1.0 - kEntropy075) / 2.0).epsilon(1e-12));
}

TEST_CASE("every scorer matches the brute-force oracle on random small tables") {
    Rng rng(2024);
    std::vector<std::string> class_names = {"a", "b", "c"};
    for (int trial = 0; trial < 400; ++trial) {
        std::size_t rows = 2 + rng.uniform_index(5);
        std::vector<std::int32_t> f(rows), c(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            // -1 plays the missing role; the library shifts it into its own
            // category, and the oracle treats it as just another code.
            f[r] = static_cast<std::int32_t>(rng.uniform_index(4)) - 1;
            c[r] = static_cast<std::int32_t>(rng.uniform_index(3));
        }
        CHECK(chi_squared(f, c) == doctest::Approx(oracle::chi2(f, c)).epsilon(1e-12));
        CHECK(info_gain(f, c) == doctest::Approx(oracle::info_gain(f, c)).epsilon(1e-12));
        CHECK(gain_ratio(f, c) == doctest::Approx(oracle::gain_ratio(f, c)).epsilon(1e-12));
        CHECK(symmetric_uncertainty(f, c) ==
              doctest::Approx(oracle::symmetric_uncertainty(f, c)).epsilon(1e-12));
        CHECK(one_r(f, c, class_names) ==
              doctest::Approx(oracle::one_r(f, c, class_names)).epsilon(1e-12));
    }
}

TEST_CASE("scores are invariant under category relabeling") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t rows = 30;
        std::vector<std::int32_t> f(rows), c(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            f[r] = static_cast<std::int32_t>(rng.uniform_index(4));
            c[r] = static_cast<std::int32_t>(rng.uniform_index(2));
        }
        // Relabel feature categories with a permutation.
        std::vector<std::int32_t> perm = {2, 0, 3, 1};
        std::vector<std::int32_t> g(rows);
        for (std::size_t r = 0; r < rows; ++r) g[r] = perm[static_cast<std::size_t>(f[r])];
        CHECK(chi_squared(f, c) == doctest::Approx(chi_squared(g, c)).epsilon(1e-12));
        CHECK(info_gain(f, c) == doctest::Approx(info_gain(g, c)).epsilon(1e-12));
        CHECK(gain_ratio(f, c) == doctest::Approx(gain_ratio(g, c)).epsilon(1e-12));
        CHECK(symmetric_uncertainty(f, c) ==
              doctest::Approx(symmetric_uncertainty(g, c)).epsilon(1e-12));
    }
}

TEST_CASE("duplicating every row doubles chi squared and fixes the rest") {
    Rng rng(13);
    std::vector<std::string> class_names = {"a", "b"};
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t rows = 20;
        std::vector<std::int32_t> f(rows), c(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            f[r] = static_cast<std::int32_t>(rng.uniform_index(3));
            c[r] = static_cast<std::int32_t>(rng.uniform_index(2));
        }
        std::vector<std::int32_t> f2 = f, c2 = c;
        f2.insert(f2.end(), f.begin(), f.end());
        c2.insert(c2.end(), c.begin(), c.end());
        CHECK(chi_squared(f2, c2) == doctest::Approx(2.0 * chi_squared(f, c)).epsilon(1e-9));
        CHECK(info_gain(f2, c2) == doctest::Approx(info_gain(f, c)).epsilon(1e-9));
        CHECK(gain_ratio(f2, c2) == doctest::Approx(gain_ratio(f, c)).epsilon(1e-9));
        CHECK(symmetric_uncertainty(f2, c2) ==
              doctest::Approx(symmetric_uncertainty(f, c)).epsilon(1e-9));
        CHECK(one_r(f2, c2, class_names) ==
              doctest::Approx(one_r(f, c, class_names)).epsilon(1e-9));
    }
}

TEST_CASE("association scores are zero exactly on factorizing tables") {
    // Product tables: cell counts are outer products of the marginals, so the
    // empirical joint factorizes and the scores must vanish.
    Rng rng(57);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::int64_t> f_marginal = {1 + (std::int64_t)rng.uniform_index(3),
                                                1 + (std::int64_t)rng.uniform_index(3)};
        std::vector<std::int64_t> c_marginal = {1 + (std::int64_t)rng.uniform_index(3),
                                                1 + (std::int64_t)rng.uniform_index(3)};
        std::vector<std::int32_t> f, c;
        for (std::size_t fv = 0; fv < f_marginal.size(); ++fv) {
            for (std::size_t cv = 0; cv < c_marginal.size(); ++cv) {
                for (std::int64_t k = 0; k < f_marginal[fv] * c_marginal[cv]; ++k) {
                    f.push_back(static_cast<std::int32_t>(fv));
                    c.push_back(static_cast<std::int32_t>(cv));
                }
            }
        }
        CHECK(chi_squared(f, c) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(info_gain(f, c) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(symmetric_uncertainty(f, c) == doctest::Approx(0.0).epsilon(1e-12));
    }
    // And any non-factorizing table scores strictly positive.
    std::vector<std::int32_t> f = {0, 0, 0, 1, 1, 1};
    std::vector<std::int32_t> c = {0, 0, 1, 1, 1, 0};
    CHECK(chi_squared(f, c) > 0.0);
    CHECK(info_gain(f, c) > 0.0);
    CHECK(symmetric_uncertainty(f, c) > 0.0);
}

TEST_CASE("score bounds hold on random inputs") {
    Rng rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t rows = 5 + rng.uniform_index(40);
        std::vector<std::int32_t> f(rows), c(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            f[r] = static_cast<std::int32_t>(rng.uniform_index(5));
            c[r] = static_cast<std::int32_t>(rng.uniform_index(3));
        }
        auto joint = oracle::joint_counts(f, c);
        double hf = oracle::entropy(joint.feature_marginal, joint.total);
        double hc = oracle::entropy(joint.class_marginal, joint.total);
        double su = symmetric_uncertainty(f, c);
        double gr = gain_ratio(f, c);
        double ig = info_gain(f, c);
        CHECK(su >= 0.0);
        CHECK(su <= 1.0 + 1e-12);
        CHECK(gr >= 0.0);
        CHECK(gr <= 1.0 + 1e-12);
        CHECK(ig <= std::min(hf, hc) + 1e-12);
    }
}

TEST_CASE("equal-frequency discretization on frozen fixtures") {
    SUBCASE("1..100 into ten bins of ten") {
        std::vector<double> values;
        for (int i = 1; i <= 100; ++i) values.push_back(i);
        Discretized d = equal_frequency_bins(values, 10);
        CHECK(d.bin_count == 10);
        std::vector<int> counts(10, 0);
        for (auto b : d.bins) ++counts[static_cast<std::size_t>(b)];
        for (int count : counts) CHECK(count == 10);
    }
    SUBCASE("all identical values land in one bin") {
        std::vector<double> values(50, 3.25);
        Discretized d = equal_frequency_bins(values, 10);
        CHECK(d.bin_count == 1);
        for (auto b : d.bins) CHECK(b == 0);
    }
    SUBCASE("duplicate-heavy input merges edges") {
        // Hand recount: quantile positions 10..90 all hold the value 1 except
        // position 90, so the only surviving cut is at 2 -> two bins.
        std::vector<double> values(90, 1.0);
        for (int v = 2; v <= 11; ++v) values.push_back(v);
        Discretized d = equal_frequency_bins(values, 10);
        CHECK(d.bin_count == 2);
        CHECK(d.bins[0] == 0);
        CHECK(d.bins[95] == 1);
    }
    SUBCASE("missing values keep their own slot") {
        std::vector<double> values = {1.0, kMissingNumber, 5.0};
        Discretized d = equal_frequency_bins(values, 2);
        CHECK(d.bins[1] == -1);
    }
    SUBCASE("all missing is an error") {
        std::vector<double> values(4, kMissingNumber);
        CHECK_THROWS_AS(equal_frequency_bins(values, 10), AllMissingError);
    }
}

TEST_CASE("rank puts a perfectly predictive column first under all methods") {
    Rng rng(31);
    const std::size_t rows = 60;
    std::vector<std::string> labels(rows);
    for (auto& l : labels) l = rng.bernoulli(0.5) ? "yes" : "no";
    std::vector<std::string> perfect(rows);
    for (std::size_t r = 0; r < rows; ++r) perfect[r] = "v_" + labels[r];
    std::vector<std::string> noise(rows);
    for (auto& v : noise) v = "n" + std::to_string(rng.uniform_index(3));

    FeatureTable table = builders::table_of(
        {{"m_perfect", perfect}, {"a_noise", noise}, {"z_noise", noise}}, labels);
    for (ScoreMethod method : all_score_methods()) {
        RankedFeatures ranked = rank(table, method);
        CHECK(ranked.entries.front().first == "m_perfect");
    }
}

TEST_CASE("all-constant columns rank lexicographically at score zero") {
    const std::size_t rows = 10;
    std::vector<std::string> ones(rows, "k");
    std::vector<std::string> labels;
    for (std::size_t r = 0; r < rows; ++r) labels.push_back(r % 2 ? "a" : "b");
    FeatureTable table =
        builders::table_of({{"b_col", ones}, {"a_col", ones}, {"c_col", ones}}, labels);
    RankedFeatures ranked = rank(table, ScoreMethod::chi2);
    REQUIRE(ranked.entries.size() == 3);
    CHECK(ranked.entries[0].first == "a_col");
    CHECK(ranked.entries[1].first == "b_col");
    CHECK(ranked.entries[2].first == "c_col");
    for (const auto& [name, score] : ranked.entries) CHECK(score == 0.0);
}

TEST_CASE("a unique key tops chi2/IG while a grouped column tops gain ratio") {
    Rng rng(47);
    const std::size_t rows = 400;
    std::vector<std::string> labels(rows);
    for (auto& l : labels) l = rng.bernoulli(0.5) ? "yes" : "no";

    // Timestamp-like: unique per row (fits perfectly in-sample).
    std::vector<std::string> click_time(rows);
    for (std::size_t r = 0; r < rows; ++r) click_time[r] = "t" + std::to_string(r);
    // Story-title-like: few values, strongly but imperfectly informative.
    std::vector<std::string> story(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        story[r] = rng.bernoulli(0.85) ? ("s_" + labels[r])
                                       : ("s_" + std::to_string(rng.uniform_index(3)));
    }
    std::vector<std::string> noise(rows);
    for (auto& v : noise) v = "n" + std::to_string(rng.uniform_index(6));

    FeatureTable table = builders::table_of(
        {{"click_time", click_time}, {"story_title", story}, {"noise", noise}}, labels);

    RankedFeatures by_chi = rank(table, ScoreMethod::chi2);
    RankedFeatures by_ig = rank(table, ScoreMethod::info_gain);
    RankedFeatures by_gr = rank(table, ScoreMethod::gain_ratio);
    CHECK(by_chi.entries.front().first == "click_time");
    CHECK(by_ig.entries.front().first == "click_time");
    CHECK(by_gr.entries.front().first == "story_title");
}

TEST_CASE("consensus applies the 3-of-5 top-bucket rule") {
    auto make_ranking = [](ScoreMethod method,
                           const std::vector<std::string>& names) {
        RankedFeatures r;
        r.method = method;
        double score = static_cast<double>(names.size());
        for (const auto& name : names) r.entries.emplace_back(name, score--);
        return r;
    };
    // 10 features; top 10% = top 1.
    std::vector<std::string> base = {"f0", "f1", "f2", "f3", "f4",
                                     "f5", "f6", "f7", "f8", "f9"};
    std::vector<std::string> swapped = base;
    std::swap(swapped[0], swapped[1]);  // f1 first

    std::vector<RankedFeatures> rankings = {
        make_ranking(ScoreMethod::chi2, base),
        make_ranking(ScoreMethod::info_gain, base),
        make_ranking(ScoreMethod::gain_ratio, base),
        make_ranking(ScoreMethod::one_r, swapped),
        make_ranking(ScoreMethod::symmetric_uncertainty, swapped)};

    auto selected = consensus(rankings, 0.10);
    CHECK(selected == std::set<std::string>{"f0"});  // 3 of 5; f1 only 2 of 5

    // Unanimous top column is always included.
    rankings[3] = make_ranking(ScoreMethod::one_r, base);
    rankings[4] = make_ranking(ScoreMethod::symmetric_uncertainty, base);
    CHECK(consensus(rankings, 0.10) == std::set<std::string>{"f0"});
}

TEST_CASE("consensus recovers 12 planted columns among 161") {
    auto planted = builders::make_planted_table(
        /*rows=*/1200, /*total_columns=*/161, /*planted_count=*/12,
        /*strength=*/0.85, /*include_unique_key=*/false, /*n_classes=*/5,
        /*seed=*/101);
    std::vector<RankedFeatures> rankings;
    for (ScoreMethod method : all_score_methods()) {
        rankings.push_back(rank(planted.table, method));
    }
    auto selected = consensus(rankings, 12.0 / 161.0);
    CHECK(std::vector<std::string>(selected.begin(), selected.end()) == planted.planted);
}

TEST_CASE("an entirely missing numeric column scores zero instead of failing") {
    FeatureTable table;
    table.add_column(Column::numeric(
        "gone", std::vector<std::optional<double>>(8, std::nullopt)));
    std::vector<std::optional<std::string>> labels;
    for (int i = 0; i < 8; ++i) labels.emplace_back(i % 2 ? "a" : "b");
    table.set_class(Column::nominal("class", labels));
    RankedFeatures ranked = rank(table, ScoreMethod::info_gain);
    REQUIRE(ranked.entries.size() == 1);
    CHECK(ranked.entries[0].second == 0.0);
}

TEST_CASE("rank warns but scores zero on a degenerate class") {
    std::vector<std::string> labels(6, "only");
    std::vector<std::string> values = {"a", "b", "a", "b", "a", "b"};
    FeatureTable table = builders::table_of({{"f", values}}, labels);
    RankedFeatures ranked = rank(table, ScoreMethod::info_gain);
    CHECK(ranked.entries[0].second == 0.0);
}
