#include "clicklab/learners/decision_table.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "clicklab/errors.hpp"
#include "clicklab/feature_select.hpp"

namespace clicklab {

namespace {

// Per-feature categorical codes used for keys: nominal codes as-is, numeric
// values binned; missing is -1.
std::vector<std::vector<std::int32_t>> key_codes(const TrainView& view,
                                                 std::vector<FeatureSchema>& schemas) {
    std::vector<std::vector<std::int32_t>> codes(view.feature_count());
    for (std::size_t f = 0; f < view.feature_count(); ++f) {
        if (schemas[f].kind == ColumnKind::nominal) {
            codes[f] = view.nominal[f];
            continue;
        }
        codes[f].assign(view.rows, -1);
        bool any = false;
        for (double v : *view.numeric[f]) {
            if (v == v) any = true;
        }
        if (!any) continue;
        Discretized d = equal_frequency_bins(*view.numeric[f], kDiscretizeBins);
        schemas[f].cuts = d.cuts;
        codes[f] = d.bins;
    }
    return codes;
}

std::string make_key(const std::vector<std::size_t>& selected,
                     const std::vector<std::vector<std::int32_t>>& codes,
                     std::size_t row) {
    std::string key;
    for (std::size_t f : selected) {
        key += std::to_string(codes[f][row]);
        key.push_back('|');
    }
    return key;
}

// Leave-one-out accuracy of the lookup table keyed on `selected`. Singleton
// keys fall back to the majority of the remaining rows.
double loo_accuracy(const TrainView& view,
                    const std::vector<std::vector<std::int32_t>>& codes,
                    const std::vector<std::size_t>& selected) {
    const std::size_t n_classes = view.class_labels.size();
    std::unordered_map<std::string, std::vector<std::int64_t>> groups;
    for (std::size_t r = 0; r < view.rows; ++r) {
        auto& counts = groups[make_key(selected, codes, r)];
        if (counts.empty()) counts.assign(n_classes, 0);
        ++counts[static_cast<std::size_t>(view.class_codes[r])];
    }
    std::vector<std::int64_t> global(n_classes, 0);
    for (auto c : view.class_codes) ++global[static_cast<std::size_t>(c)];

    std::size_t correct = 0;
    for (std::size_t r = 0; r < view.rows; ++r) {
        const auto own = static_cast<std::size_t>(view.class_codes[r]);
        const auto& counts = groups[make_key(selected, codes, r)];
        std::int64_t group_total = 0;
        for (auto c : counts) group_total += c;

        std::size_t best = 0;
        std::int64_t best_count = -1;
        if (group_total > 1) {
            for (std::size_t c = 0; c < n_classes; ++c) {
                std::int64_t count = counts[c] - (c == own ? 1 : 0);
                if (count > best_count) {
                    best_count = count;
                    best = c;
                }
            }
        } else {
            for (std::size_t c = 0; c < n_classes; ++c) {
                std::int64_t count = global[c] - (c == own ? 1 : 0);
                if (count > best_count) {
                    best_count = count;
                    best = c;
                }
            }
        }
        if (best == own) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(view.rows);
}

}  // namespace

std::unique_ptr<DecisionTableModel> train_decision_table(
    const TrainView& view, const DecisionTableConfig& config, std::uint64_t seed) {
    if (view.rows == 0) throw EmptyTableError();

    auto model = std::make_unique<DecisionTableModel>();
    model->kind = LearnerKind::decision_table;
    model->class_labels = view.class_labels;
    model->features = view.schemas;
    model->train_seed = seed;
    model->hyperparameters = {{"max_stale", config.max_stale}};

    auto codes = key_codes(view, model->features);

    // Best-first forward search over feature subsets.
    using Subset = std::vector<std::size_t>;
    auto subset_key = [](const Subset& s) {
        std::string key;
        for (std::size_t f : s) {
            key += std::to_string(f);
            key.push_back(',');
        }
        return key;
    };

    Subset best_subset;
    double best_acc = loo_accuracy(view, codes, best_subset);
    std::set<std::string> visited{subset_key(best_subset)};

    struct OpenEntry {
        double acc;
        Subset subset;
    };
    std::vector<OpenEntry> open{{best_acc, best_subset}};
    int stale = 0;

    while (!open.empty() && stale <= config.max_stale) {
        // Pop the best open node: highest accuracy, then smallest subset,
        // then lexicographic feature order.
        std::size_t pick = 0;
        for (std::size_t i = 1; i < open.size(); ++i) {
            const auto& a = open[i];
            const auto& b = open[pick];
            if (a.acc > b.acc + 1e-12 ||
                (std::abs(a.acc - b.acc) <= 1e-12 &&
                 (a.subset.size() < b.subset.size() ||
                  (a.subset.size() == b.subset.size() && a.subset < b.subset)))) {
                pick = i;
            }
        }
        Subset current = std::move(open[pick].subset);
        open.erase(open.begin() + static_cast<long>(pick));

        bool improved = false;
        for (std::size_t f = 0; f < view.feature_count(); ++f) {
            if (std::find(current.begin(), current.end(), f) != current.end()) continue;
            Subset child = current;
            child.push_back(f);
            std::sort(child.begin(), child.end());
            if (!visited.insert(subset_key(child)).second) continue;
            double acc = loo_accuracy(view, codes, child);
            if (acc > best_acc + 1e-12 ||
                (std::abs(acc - best_acc) <= 1e-12 && child.size() < best_subset.size())) {
                best_acc = acc;
                best_subset = child;
                improved = true;
            }
            open.push_back({acc, std::move(child)});
        }
        stale = improved ? 0 : stale + 1;
    }

    model->selected = best_subset;
    const std::size_t n_classes = view.class_labels.size();
    for (std::size_t r = 0; r < view.rows; ++r) {
        auto& counts = model->lookup[make_key(model->selected, codes, r)];
        if (counts.empty()) counts.assign(n_classes, 0);
        ++counts[static_cast<std::size_t>(view.class_codes[r])];
    }
    model->global_counts.assign(n_classes, 0);
    for (auto c : view.class_codes) ++model->global_counts[static_cast<std::size_t>(c)];
    return model;
}

ClassDistribution DecisionTableModel::predict_encoded(const EncodedTable& data,
                                                      std::size_t row) const {
    std::string key;
    for (std::size_t f : selected) {
        std::int32_t code;
        if (features[f].kind == ColumnKind::nominal) {
            code = data.nominal[f][row];
            if (code == kUnseenCode) code = -2;
        } else {
            double v = (*data.numeric[f])[row];
            code = v != v ? -1 : bin_for(features[f].cuts, v);
        }
        key += std::to_string(code);
        key.push_back('|');
    }
    auto it = lookup.find(key);
    const auto& counts = it != lookup.end() ? it->second : global_counts;

    ClassDistribution dist;
    const std::size_t k = class_labels.size();
    dist.probabilities.resize(k);
    std::int64_t total = 0;
    for (auto c : counts) total += c;
    for (std::size_t c = 0; c < k; ++c) {
        dist.probabilities[c] = (static_cast<double>(counts[c]) + 1.0) /
                                (static_cast<double>(total) + static_cast<double>(k));
    }
    return dist;
}

nlohmann::json DecisionTableModel::params_to_json() const {
    nlohmann::json table = nlohmann::json::object();
    for (const auto& [key, counts] : lookup) table[key] = counts;
    return nlohmann::json{{"selected", selected},
                          {"lookup", std::move(table)},
                          {"global_counts", global_counts}};
}

void DecisionTableModel::params_from_json(const nlohmann::json& j) {
    selected = j.at("selected").get<std::vector<std::size_t>>();
    lookup.clear();
    for (const auto& [key, counts] : j.at("lookup").items()) {
        lookup[key] = counts.get<std::vector<std::int64_t>>();
    }
    global_counts = j.at("global_counts").get<std::vector<std::int64_t>>();
}

}  // namespace clicklab
