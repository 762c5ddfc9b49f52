#include "clicklab/learners/tree.hpp"

#include <algorithm>
#include <cmath>

#include "clicklab/errors.hpp"

namespace clicklab {

namespace {

double entropy_counts(const std::vector<std::int64_t>& counts, std::int64_t total) {
    if (total <= 0) return 0.0;
    double h = 0.0;
    for (auto c : counts) {
        if (c <= 0) continue;
        double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

struct SplitEval {
    bool valid = false;
    double info_gain = 0.0;
    double gain_ratio = 0.0;
    double threshold = 0.0;       // numeric
    bool missing_goes_left = true;
};

struct Builder {
    const TrainView& view;
    const TreeConfig& config;
    Rng& rng;
    std::vector<TreeNode> nodes;
    std::vector<std::size_t> features;  // usable feature indices

    std::size_t n_classes() const { return view.class_labels.size(); }

    std::vector<std::int64_t> count_classes(const std::vector<std::size_t>& rows) const {
        std::vector<std::int64_t> counts(n_classes(), 0);
        for (std::size_t r : rows)
            ++counts[static_cast<std::size_t>(view.class_codes[r])];
        return counts;
    }

    SplitEval eval_nominal(std::size_t f, const std::vector<std::size_t>& rows,
                           double node_entropy) const {
        const auto& codes = view.nominal[f];
        const std::size_t n_values = view.schemas[f].values.size();
        // Branch index n_values is the missing branch.
        std::vector<std::vector<std::int64_t>> branch_counts(
            n_values + 1, std::vector<std::int64_t>(n_classes(), 0));
        std::vector<std::int64_t> branch_totals(n_values + 1, 0);
        for (std::size_t r : rows) {
            std::int32_t code = codes[r];
            std::size_t b = code == kMissingCode ? n_values : static_cast<std::size_t>(code);
            ++branch_counts[b][static_cast<std::size_t>(view.class_codes[r])];
            ++branch_totals[b];
        }
        int nonempty = 0;
        int big_enough = 0;
        for (auto t : branch_totals) {
            if (t > 0) ++nonempty;
            if (t >= config.min_leaf) ++big_enough;
        }
        SplitEval eval;
        if (nonempty < 2 || big_enough < 2) return eval;

        const auto total = static_cast<std::int64_t>(rows.size());
        double child_entropy = 0.0;
        double split_info = 0.0;
        for (std::size_t b = 0; b <= n_values; ++b) {
            if (branch_totals[b] == 0) continue;
            double w = static_cast<double>(branch_totals[b]) / static_cast<double>(total);
            child_entropy += w * entropy_counts(branch_counts[b], branch_totals[b]);
            split_info -= w * std::log2(w);
        }
        eval.valid = true;
        eval.info_gain = std::max(node_entropy - child_entropy, 0.0);
        eval.gain_ratio = split_info > 0.0 ? eval.info_gain / split_info : 0.0;
        return eval;
    }

    SplitEval eval_numeric(std::size_t f, const std::vector<std::size_t>& rows,
                           double node_entropy) const {
        const auto& values = *view.numeric[f];
        std::vector<std::pair<double, std::int32_t>> present;
        present.reserve(rows.size());
        std::vector<std::int64_t> missing_counts(n_classes(), 0);
        std::int64_t n_missing = 0;
        for (std::size_t r : rows) {
            double v = values[r];
            if (v != v) {
                ++missing_counts[static_cast<std::size_t>(view.class_codes[r])];
                ++n_missing;
            } else {
                present.emplace_back(v, view.class_codes[r]);
            }
        }
        SplitEval eval;
        if (present.size() < 2) return eval;
        std::sort(present.begin(), present.end());

        const auto n_present = static_cast<std::int64_t>(present.size());
        std::vector<std::int64_t> left(n_classes(), 0);
        std::vector<std::int64_t> right(n_classes(), 0);
        for (const auto& [v, c] : present) ++right[static_cast<std::size_t>(c)];
        double present_entropy = entropy_counts(right, n_present);

        double best_gain = -1.0;
        double best_threshold = 0.0;
        std::int64_t n_left = 0;
        for (std::size_t i = 0; i + 1 < present.size(); ++i) {
            ++left[static_cast<std::size_t>(present[i].second)];
            --right[static_cast<std::size_t>(present[i].second)];
            ++n_left;
            if (present[i].first == present[i + 1].first) continue;
            if (n_left < config.min_leaf || n_present - n_left < config.min_leaf) continue;
            double hl = entropy_counts(left, n_left);
            double hr = entropy_counts(right, n_present - n_left);
            double child = (static_cast<double>(n_left) * hl +
                            static_cast<double>(n_present - n_left) * hr) /
                           static_cast<double>(n_present);
            double gain = present_entropy - child;
            if (gain > best_gain + 1e-12) {
                best_gain = gain;
                best_threshold =
                    present[i].first + (present[i + 1].first - present[i].first) / 2.0;
            }
        }
        if (best_gain < 0.0) return eval;

        // Fraction-of-known correction, then split info over the routed sizes.
        double known_fraction =
            static_cast<double>(n_present) / static_cast<double>(rows.size());
        (void)node_entropy;
        eval.valid = true;
        eval.info_gain = std::max(best_gain * known_fraction, 0.0);
        eval.threshold = best_threshold;

        std::int64_t left_total = 0;
        for (const auto& [v, c] : present) {
            if (v <= best_threshold) ++left_total;
        }
        std::int64_t right_total = n_present - left_total;
        eval.missing_goes_left = left_total >= right_total;
        if (eval.missing_goes_left) {
            left_total += n_missing;
        } else {
            right_total += n_missing;
        }
        double total = static_cast<double>(rows.size());
        double split_info = 0.0;
        for (std::int64_t t : {left_total, right_total}) {
            if (t <= 0) continue;
            double w = static_cast<double>(t) / total;
            split_info -= w * std::log2(w);
        }
        eval.gain_ratio = split_info > 0.0 ? eval.info_gain / split_info : 0.0;
        return eval;
    }

    int build(const std::vector<std::size_t>& rows) {
        const int node_index = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes[node_index].class_counts = count_classes(rows);

        const auto& counts = nodes[node_index].class_counts;
        std::int64_t total = static_cast<std::int64_t>(rows.size());
        bool pure = false;
        for (auto c : counts) {
            if (c == total) pure = true;
        }
        if (pure || total < 2 * config.min_leaf) return node_index;

        double node_entropy = entropy_counts(counts, total);

        // Candidate features: the configured subset, optionally subsampled at
        // this node (random forest behavior).
        std::vector<std::size_t> candidates = features;
        if (config.random_candidates > 0 &&
            candidates.size() > static_cast<std::size_t>(config.random_candidates)) {
            for (std::size_t i = 0; i < static_cast<std::size_t>(config.random_candidates); ++i) {
                std::size_t j = i + rng.uniform_index(candidates.size() - i);
                std::swap(candidates[i], candidates[j]);
            }
            candidates.resize(static_cast<std::size_t>(config.random_candidates));
            std::sort(candidates.begin(), candidates.end());
        }

        std::vector<std::pair<std::size_t, SplitEval>> admissible;
        for (std::size_t f : candidates) {
            SplitEval eval = view.schemas[f].kind == ColumnKind::nominal
                                 ? eval_nominal(f, rows, node_entropy)
                                 : eval_numeric(f, rows, node_entropy);
            if (eval.valid) admissible.emplace_back(f, eval);
        }
        if (admissible.empty()) return node_index;

        double avg_gain = 0.0;
        for (const auto& [f, eval] : admissible) avg_gain += eval.info_gain;
        avg_gain /= static_cast<double>(admissible.size());

        // Split selection: best gain ratio among attributes with at least
        // average info gain; ties break by feature name, then threshold.
        const std::pair<std::size_t, SplitEval>* best = nullptr;
        for (const auto& cand : admissible) {
            if (cand.second.info_gain + 1e-12 < avg_gain) continue;
            if (!best) {
                best = &cand;
                continue;
            }
            double a = cand.second.gain_ratio;
            double b = best->second.gain_ratio;
            if (a > b + 1e-12 ||
                (std::abs(a - b) <= 1e-12 &&
                 view.schemas[cand.first].name < view.schemas[best->first].name)) {
                best = &cand;
            }
        }
        if (!best) return node_index;

        const std::size_t f = best->first;
        const SplitEval& eval = best->second;

        if (view.schemas[f].kind == ColumnKind::nominal) {
            const std::size_t n_values = view.schemas[f].values.size();
            std::vector<std::vector<std::size_t>> branches(n_values + 1);
            for (std::size_t r : rows) {
                std::int32_t code = view.nominal[f][r];
                std::size_t b = code == kMissingCode ? n_values : static_cast<std::size_t>(code);
                branches[b].push_back(r);
            }
            nodes[node_index].feature = static_cast<int>(f);
            nodes[node_index].children.assign(n_values, -1);
            for (std::size_t b = 0; b < n_values; ++b) {
                if (branches[b].empty()) continue;
                int child = build(branches[b]);
                nodes[node_index].children[b] = child;
            }
            if (!branches[n_values].empty()) {
                nodes[node_index].missing_child = build(branches[n_values]);
            }
        } else {
            std::vector<std::size_t> left_rows;
            std::vector<std::size_t> right_rows;
            for (std::size_t r : rows) {
                double v = (*view.numeric[f])[r];
                bool goes_left = v != v ? eval.missing_goes_left : v <= eval.threshold;
                (goes_left ? left_rows : right_rows).push_back(r);
            }
            nodes[node_index].feature = static_cast<int>(f);
            nodes[node_index].threshold = eval.threshold;
            nodes[node_index].missing_goes_left = eval.missing_goes_left;
            nodes[node_index].children.resize(2);
            nodes[node_index].children[0] = build(left_rows);
            nodes[node_index].children[1] = build(right_rows);
        }
        return node_index;
    }

    // Drops nodes orphaned by pruning and renumbers the rest in DFS order.
    std::vector<TreeNode> compact() const {
        std::vector<TreeNode> out;
        compact_visit(0, out);
        return out;
    }

    int compact_visit(int index, std::vector<TreeNode>& out) const {
        const TreeNode& node = nodes[static_cast<std::size_t>(index)];
        int new_index = static_cast<int>(out.size());
        out.push_back(node);
        if (node.feature < 0) {
            out[static_cast<std::size_t>(new_index)].children.clear();
            out[static_cast<std::size_t>(new_index)].missing_child = -1;
            return new_index;
        }
        for (std::size_t i = 0; i < node.children.size(); ++i) {
            int child = node.children[i];
            out[static_cast<std::size_t>(new_index)].children[i] =
                child < 0 ? -1 : compact_visit(child, out);
        }
        if (node.missing_child >= 0) {
            out[static_cast<std::size_t>(new_index)].missing_child =
                compact_visit(node.missing_child, out);
        }
        return new_index;
    }

    // Pessimistic subtree-replacement pruning (bottom-up).
    double estimated_errors(int index) {
        TreeNode& node = nodes[static_cast<std::size_t>(index)];
        std::int64_t total = 0;
        std::int64_t best = 0;
        for (auto c : node.class_counts) {
            total += c;
            best = std::max(best, c);
        }
        double observed = static_cast<double>(total - best);
        double as_leaf = observed + add_errs(static_cast<double>(total), observed,
                                             config.prune_confidence);
        if (node.feature < 0) return as_leaf;

        double as_subtree = 0.0;
        for (int child : node.children) {
            if (child >= 0) as_subtree += estimated_errors(child);
        }
        if (node.missing_child >= 0) as_subtree += estimated_errors(node.missing_child);

        if (as_leaf <= as_subtree + 0.1) {
            node.feature = -1;
            node.children.clear();
            node.missing_child = -1;
            return as_leaf;
        }
        return as_subtree;
    }
};

}  // namespace

std::unique_ptr<TreeModel> build_tree(const TrainView& view,
                                      const std::vector<std::size_t>& rows,
                                      const TreeConfig& config, Rng& rng,
                                      std::uint64_t seed) {
    if (view.rows == 0 || rows.empty()) throw EmptyTableError();
    Builder builder{view, config, rng, {}, {}};
    if (config.feature_subset.empty()) {
        builder.features.resize(view.feature_count());
        for (std::size_t i = 0; i < builder.features.size(); ++i) builder.features[i] = i;
    } else {
        builder.features = config.feature_subset;
        std::sort(builder.features.begin(), builder.features.end());
    }
    builder.build(rows);
    if (config.prune) builder.estimated_errors(0);

    auto model = std::make_unique<TreeModel>();
    model->kind = LearnerKind::c45;
    model->class_labels = view.class_labels;
    model->features = view.schemas;
    model->train_seed = seed;
    model->nodes = builder.compact();
    return model;
}

std::unique_ptr<TreeModel> train_c45(const TrainView& view, const TreeConfig& config,
                                     std::uint64_t seed) {
    if (config.min_leaf < 1) throw InvalidConfigError("min_leaf must be >= 1");
    if (config.prune_confidence <= 0.0 || config.prune_confidence >= 1.0)
        throw InvalidConfigError("prune_confidence must be in (0, 1)");
    std::vector<std::size_t> rows(view.rows);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    Rng rng(derive_seed(seed, "c45"));
    auto model = build_tree(view, rows, config, rng, seed);
    model->hyperparameters = {{"min_leaf", config.min_leaf},
                              {"prune", config.prune},
                              {"prune_confidence", config.prune_confidence}};
    return model;
}

ClassDistribution TreeModel::predict_encoded(const EncodedTable& data,
                                             std::size_t row) const {
    int index = 0;
    for (;;) {
        const TreeNode& node = nodes[static_cast<std::size_t>(index)];
        if (node.feature < 0) break;
        const std::size_t f = static_cast<std::size_t>(node.feature);
        int next = -1;
        if (features[f].kind == ColumnKind::nominal) {
            std::int32_t code = data.nominal[f][row];
            if (code == kMissingCode) {
                next = node.missing_child;
            } else if (code >= 0 &&
                       static_cast<std::size_t>(code) < node.children.size()) {
                next = node.children[static_cast<std::size_t>(code)];
            }
        } else {
            double v = (*data.numeric[f])[row];
            bool left = v != v ? node.missing_goes_left : v <= node.threshold;
            next = node.children[left ? 0 : 1];
        }
        if (next < 0) break;  // unseen value or empty branch: stop here
        index = next;
    }
    const TreeNode& node = nodes[static_cast<std::size_t>(index)];
    ClassDistribution dist;
    const std::size_t k = class_labels.size();
    dist.probabilities.resize(k);
    std::int64_t total = 0;
    for (auto c : node.class_counts) total += c;
    for (std::size_t c = 0; c < k; ++c) {
        dist.probabilities[c] = (static_cast<double>(node.class_counts[c]) + 1.0) /
                                (static_cast<double>(total) + static_cast<double>(k));
    }
    return dist;
}

std::size_t TreeModel::depth() const {
    // Iterative depth over the node array.
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    std::size_t depth = 0;
    while (!stack.empty()) {
        auto [index, d] = stack.back();
        stack.pop_back();
        depth = std::max(depth, d);
        const TreeNode& node = nodes[static_cast<std::size_t>(index)];
        if (node.feature < 0) continue;
        for (int child : node.children) {
            if (child >= 0) stack.emplace_back(child, d + 1);
        }
        if (node.missing_child >= 0) stack.emplace_back(node.missing_child, d + 1);
    }
    return depth;
}

std::size_t TreeModel::leaf_count() const {
    std::size_t leaves = 0;
    for (const auto& node : nodes) {
        if (node.feature < 0) ++leaves;
    }
    return leaves;
}

nlohmann::json TreeModel::params_to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& node : nodes) {
        nlohmann::json j;
        j["feature"] = node.feature;
        j["threshold"] = node.threshold;
        j["missing_goes_left"] = node.missing_goes_left;
        j["children"] = node.children;
        j["missing_child"] = node.missing_child;
        j["class_counts"] = node.class_counts;
        arr.push_back(std::move(j));
    }
    return nlohmann::json{{"nodes", std::move(arr)}};
}

void TreeModel::params_from_json(const nlohmann::json& j) {
    nodes.clear();
    for (const auto& item : j.at("nodes")) {
        TreeNode node;
        node.feature = item.at("feature").get<int>();
        node.threshold = item.at("threshold").get<double>();
        node.missing_goes_left = item.at("missing_goes_left").get<bool>();
        node.children = item.at("children").get<std::vector<int>>();
        node.missing_child = item.at("missing_child").get<int>();
        node.class_counts = item.at("class_counts").get<std::vector<std::int64_t>>();
        nodes.push_back(std::move(node));
    }
}

}  // namespace clicklab
