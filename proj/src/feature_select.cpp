#include "clicklab/feature_select.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>

#include <json.hpp>

#include "clicklab/errors.hpp"

namespace clicklab {

std::string_view to_string(ScoreMethod m) {
    switch (m) {
        case ScoreMethod::chi2: return "chi2";
        case ScoreMethod::info_gain: return "info_gain";
        case ScoreMethod::gain_ratio: return "gain_ratio";
        case ScoreMethod::one_r: return "one_r";
        case ScoreMethod::symmetric_uncertainty: return "symmetric_uncertainty";
    }
    return "chi2";
}

std::optional<ScoreMethod> score_method_from(std::string_view s) {
    for (ScoreMethod m : all_score_methods()) {
        if (to_string(m) == s) return m;
    }
    return std::nullopt;
}

const std::vector<ScoreMethod>& all_score_methods() {
    static const std::vector<ScoreMethod> methods = {
        ScoreMethod::chi2, ScoreMethod::info_gain, ScoreMethod::gain_ratio,
        ScoreMethod::one_r, ScoreMethod::symmetric_uncertainty,
    };
    return methods;
}

Discretized equal_frequency_bins(const std::vector<double>& values, int bins) {
    if (bins < 2) throw InvalidConfigError("bins must be >= 2");
    std::vector<double> sorted;
    sorted.reserve(values.size());
    for (double v : values) {
        if (v == v) sorted.push_back(v);
    }
    if (sorted.empty()) throw AllMissingError();
    std::sort(sorted.begin(), sorted.end());

    Discretized out;
    const std::size_t n = sorted.size();
    for (int i = 1; i < bins; ++i) {
        double cut = sorted[n * static_cast<std::size_t>(i) / static_cast<std::size_t>(bins)];
        if (cut <= sorted.front()) continue;           // empty bottom bin
        if (!out.cuts.empty() && cut == out.cuts.back()) continue;  // duplicate edge
        out.cuts.push_back(cut);
    }
    out.bin_count = static_cast<std::int32_t>(out.cuts.size()) + 1;
    out.bins.reserve(values.size());
    for (double v : values) {
        out.bins.push_back(v == v ? bin_for(out.cuts, v) : -1);
    }
    return out;
}

std::int32_t bin_for(const std::vector<double>& cuts, double value) {
    auto it = std::upper_bound(cuts.begin(), cuts.end(), value);
    return static_cast<std::int32_t>(it - cuts.begin());
}

namespace {

// Joint counts over (feature category, class category); missing codes are
// shifted into category 0.
struct Contingency {
    std::vector<std::int64_t> cells;  // f * n_class + c
    std::vector<std::int64_t> row_totals;
    std::vector<std::int64_t> col_totals;
    std::size_t n_feature = 0;
    std::size_t n_class = 0;
    std::int64_t total = 0;
};

Contingency build_contingency(const std::vector<std::int32_t>& feature,
                              const std::vector<std::int32_t>& cls) {
    if (feature.size() != cls.size())
        throw SchemaMismatchError("feature and class lengths differ");
    std::int32_t max_f = -1;
    std::int32_t max_c = -1;
    for (std::size_t i = 0; i < feature.size(); ++i) {
        max_f = std::max(max_f, feature[i]);
        max_c = std::max(max_c, cls[i]);
    }
    Contingency t;
    t.n_feature = static_cast<std::size_t>(max_f + 2);  // +1 missing slot
    t.n_class = static_cast<std::size_t>(max_c + 2);
    t.cells.assign(t.n_feature * t.n_class, 0);
    t.row_totals.assign(t.n_feature, 0);
    t.col_totals.assign(t.n_class, 0);
    for (std::size_t i = 0; i < feature.size(); ++i) {
        std::size_t f = static_cast<std::size_t>(feature[i] + 1);
        std::size_t c = static_cast<std::size_t>(cls[i] + 1);
        ++t.cells[f * t.n_class + c];
        ++t.row_totals[f];
        ++t.col_totals[c];
        ++t.total;
    }
    return t;
}

bool degenerate_class(const Contingency& t) {
    std::size_t distinct = 0;
    for (auto c : t.col_totals) {
        if (c > 0) ++distinct;
    }
    return distinct < 2;
}

double entropy_of(const std::vector<std::int64_t>& counts, std::int64_t total) {
    if (total <= 0) return 0.0;
    double h = 0.0;
    for (auto c : counts) {
        if (c <= 0) continue;
        double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

double conditional_class_entropy(const Contingency& t) {
    double h = 0.0;
    for (std::size_t f = 0; f < t.n_feature; ++f) {
        if (t.row_totals[f] == 0) continue;
        double hf = 0.0;
        for (std::size_t c = 0; c < t.n_class; ++c) {
            std::int64_t count = t.cells[f * t.n_class + c];
            if (count <= 0) continue;
            double p = static_cast<double>(count) / static_cast<double>(t.row_totals[f]);
            hf -= p * std::log2(p);
        }
        h += static_cast<double>(t.row_totals[f]) / static_cast<double>(t.total) * hf;
    }
    return h;
}

}  // namespace

double chi_squared(const std::vector<std::int32_t>& feature,
                   const std::vector<std::int32_t>& cls) {
    Contingency t = build_contingency(feature, cls);
    if (t.total == 0 || degenerate_class(t)) return 0.0;
    double chi = 0.0;
    for (std::size_t f = 0; f < t.n_feature; ++f) {
        if (t.row_totals[f] == 0) continue;
        for (std::size_t c = 0; c < t.n_class; ++c) {
            if (t.col_totals[c] == 0) continue;
            double expected = static_cast<double>(t.row_totals[f]) *
                              static_cast<double>(t.col_totals[c]) /
                              static_cast<double>(t.total);
            double observed = static_cast<double>(t.cells[f * t.n_class + c]);
            double d = observed - expected;
            chi += d * d / expected;
        }
    }
    return chi;
}

double info_gain(const std::vector<std::int32_t>& feature,
                 const std::vector<std::int32_t>& cls) {
    Contingency t = build_contingency(feature, cls);
    if (t.total == 0 || degenerate_class(t)) return 0.0;
    double hc = entropy_of(t.col_totals, t.total);
    double gain = hc - conditional_class_entropy(t);
    return gain < 0.0 ? 0.0 : gain;
}

double gain_ratio(const std::vector<std::int32_t>& feature,
                  const std::vector<std::int32_t>& cls) {
    Contingency t = build_contingency(feature, cls);
    if (t.total == 0 || degenerate_class(t)) return 0.0;
    double split_info = entropy_of(t.row_totals, t.total);
    if (split_info <= 0.0) return 0.0;
    double hc = entropy_of(t.col_totals, t.total);
    double gain = hc - conditional_class_entropy(t);
    if (gain < 0.0) gain = 0.0;
    return gain / split_info;
}

double one_r(const std::vector<std::int32_t>& feature,
             const std::vector<std::int32_t>& cls,
             const std::vector<std::string>& class_dict) {
    Contingency t = build_contingency(feature, cls);
    if (t.total == 0 || degenerate_class(t)) return 0.0;
    // Per feature value, predict the majority class; ties go to the
    // lexicographically first class name. Index 0 is the missing category.
    auto class_name = [&](std::size_t idx) -> std::string_view {
        if (idx == 0 || idx > class_dict.size()) return "?";
        return class_dict[idx - 1];
    };
    std::int64_t correct = 0;
    for (std::size_t f = 0; f < t.n_feature; ++f) {
        if (t.row_totals[f] == 0) continue;
        std::int64_t best = -1;
        std::size_t best_c = 0;
        for (std::size_t c = 0; c < t.n_class; ++c) {
            std::int64_t count = t.cells[f * t.n_class + c];
            if (count > best ||
                (count == best && class_name(c) < class_name(best_c))) {
                best = count;
                best_c = c;
            }
        }
        correct += best;
    }
    return static_cast<double>(correct) / static_cast<double>(t.total);
}

double symmetric_uncertainty(const std::vector<std::int32_t>& feature,
                             const std::vector<std::int32_t>& cls) {
    Contingency t = build_contingency(feature, cls);
    if (t.total == 0 || degenerate_class(t)) return 0.0;
    double hf = entropy_of(t.row_totals, t.total);
    double hc = entropy_of(t.col_totals, t.total);
    if (hf + hc <= 0.0) return 0.0;
    double gain = hc - conditional_class_entropy(t);
    if (gain < 0.0) gain = 0.0;
    return 2.0 * gain / (hf + hc);
}

namespace {

// Class dictionary reordered so that codes map to names: one_r tie-breaking
// needs names for codes as they appear in the contingency table.
std::vector<std::int32_t> scoring_codes(const Column& col) {
    if (col.kind == ColumnKind::nominal) return col.codes;
    for (double v : col.numbers) {
        if (v == v) {
            Discretized d = equal_frequency_bins(col.numbers, kDiscretizeBins);
            return d.bins;
        }
    }
    // Entirely missing numeric column: one all-missing category, score 0.
    return std::vector<std::int32_t>(col.numbers.size(), -1);
}

}  // namespace

RankedFeatures rank(const FeatureTable& table, ScoreMethod method) {
    if (table.row_count < 2) throw EmptyTableError();
    std::vector<std::string> distinct_classes = table.class_labels();
    if (distinct_classes.size() < 2) {
        std::cerr << "[feature_select] warning: class column is degenerate; "
                     "all scores are 0\n";
    }

    RankedFeatures ranked;
    ranked.method = method;
    ranked.entries.reserve(table.columns.size());
    for (const auto& col : table.columns) {
        std::vector<std::int32_t> codes = scoring_codes(col);
        double score = 0.0;
        switch (method) {
            case ScoreMethod::chi2:
                score = chi_squared(codes, table.class_column.codes);
                break;
            case ScoreMethod::info_gain:
                score = info_gain(codes, table.class_column.codes);
                break;
            case ScoreMethod::gain_ratio:
                score = gain_ratio(codes, table.class_column.codes);
                break;
            case ScoreMethod::one_r:
                score = one_r(codes, table.class_column.codes, table.class_column.dict);
                break;
            case ScoreMethod::symmetric_uncertainty:
                score = symmetric_uncertainty(codes, table.class_column.codes);
                break;
        }
        ranked.entries.emplace_back(col.name, score);
    }
    std::sort(ranked.entries.begin(), ranked.entries.end(),
              [](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second > b.second;
                  return a.first < b.first;
              });
    return ranked;
}

std::set<std::string> consensus(const std::vector<RankedFeatures>& rankings,
                                double top_fraction) {
    if (top_fraction <= 0.0 || top_fraction > 1.0)
        throw InvalidConfigError("top_fraction must be in (0, 1]");
    std::map<std::string, int> appearances;
    for (const auto& ranking : rankings) {
        const std::size_t m = ranking.entries.size();
        std::size_t top = static_cast<std::size_t>(
            std::ceil(top_fraction * static_cast<double>(m) - 1e-9));
        if (top < 1) top = 1;
        if (top > m) top = m;
        for (std::size_t i = 0; i < top; ++i) {
            ++appearances[ranking.entries[i].first];
        }
    }
    std::set<std::string> out;
    for (const auto& [name, count] : appearances) {
        if (count >= 3) out.insert(name);
    }
    return out;
}

std::string rankings_to_csv(const std::vector<RankedFeatures>& rankings) {
    std::string out = "method,rank,feature,score\n";
    char buf[64];
    for (const auto& ranking : rankings) {
        for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.9g", ranking.entries[i].second);
            out += std::string(to_string(ranking.method)) + "," + std::to_string(i + 1) +
                   "," + ranking.entries[i].first + "," + buf + "\n";
        }
    }
    return out;
}

std::string consensus_to_json(const std::set<std::string>& features) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& name : features) j.push_back(name);
    return j.dump(2) + "\n";
}

}  // namespace clicklab
