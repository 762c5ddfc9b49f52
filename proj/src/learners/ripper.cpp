#include "clicklab/learners/ripper.hpp"

#include <algorithm>
#include <cmath>

#include "clicklab/errors.hpp"
#include "clicklab/rng.hpp"

namespace clicklab {

namespace {

constexpr double kDlStopMargin = 64.0;  // bits over the best ruleset seen

bool condition_matches(const RuleCondition& cond, const TrainView& view,
                       std::size_t row) {
    if (view.schemas[static_cast<std::size_t>(cond.feature)].kind ==
        ColumnKind::nominal) {
        std::int32_t code = view.nominal[static_cast<std::size_t>(cond.feature)][row];
        return code >= 0 && code == cond.value;
    }
    double v = (*view.numeric[static_cast<std::size_t>(cond.feature)])[row];
    if (v != v) return false;
    return cond.op == RuleCondition::Op::le ? v <= cond.threshold : v >= cond.threshold;
}

bool rule_matches(const Rule& rule, const TrainView& view, std::size_t row) {
    for (const auto& cond : rule.conditions) {
        if (!condition_matches(cond, view, row)) return false;
    }
    return true;
}

double log2_ratio(double p, double n) { return std::log2(p / (p + n)); }

struct GrowCandidate {
    bool found = false;
    RuleCondition condition;
    double gain = 0.0;
};

// Deterministic preference when FOIL gains tie.
bool candidate_beats(const GrowCandidate& a, const GrowCandidate& b) {
    if (!b.found) return a.found;
    if (a.gain != b.gain) return a.gain > b.gain;
    if (a.condition.feature != b.condition.feature)
        return a.condition.feature < b.condition.feature;
    if (a.condition.op != b.condition.op)
        return static_cast<int>(a.condition.op) < static_cast<int>(b.condition.op);
    if (a.condition.value != b.condition.value)
        return a.condition.value < b.condition.value;
    return a.condition.threshold < b.condition.threshold;
}

struct ClassLearner {
    const TrainView& view;
    std::int32_t target;
    Rng& rng;
    double total_conditions;

    bool is_pos(std::size_t row) const { return view.class_codes[row] == target; }

    GrowCandidate best_condition(const std::vector<std::size_t>& covered_pos,
                                 const std::vector<std::size_t>& covered_neg) const {
        const double big_p = static_cast<double>(covered_pos.size());
        const double big_n = static_cast<double>(covered_neg.size());
        if (big_p == 0.0) return {};
        const double base = log2_ratio(big_p, big_n);

        GrowCandidate best;
        for (std::size_t f = 0; f < view.feature_count(); ++f) {
            if (view.schemas[f].kind == ColumnKind::nominal) {
                const std::size_t n_values = view.schemas[f].values.size();
                std::vector<std::int64_t> pv(n_values, 0);
                std::vector<std::int64_t> nv(n_values, 0);
                for (std::size_t r : covered_pos) {
                    std::int32_t code = view.nominal[f][r];
                    if (code >= 0) ++pv[static_cast<std::size_t>(code)];
                }
                for (std::size_t r : covered_neg) {
                    std::int32_t code = view.nominal[f][r];
                    if (code >= 0) ++nv[static_cast<std::size_t>(code)];
                }
                for (std::size_t v = 0; v < n_values; ++v) {
                    if (pv[v] == 0) continue;
                    double p = static_cast<double>(pv[v]);
                    double n = static_cast<double>(nv[v]);
                    GrowCandidate cand;
                    cand.found = true;
                    cand.gain = p * (log2_ratio(p, n) - base);
                    cand.condition = {static_cast<int>(f), RuleCondition::Op::eq,
                                      static_cast<std::int32_t>(v), 0.0};
                    if (cand.gain > 0.0 && candidate_beats(cand, best)) best = cand;
                }
            } else {
                std::vector<std::pair<double, bool>> present;
                present.reserve(covered_pos.size() + covered_neg.size());
                for (std::size_t r : covered_pos) {
                    double v = (*view.numeric[f])[r];
                    if (v == v) present.emplace_back(v, true);
                }
                for (std::size_t r : covered_neg) {
                    double v = (*view.numeric[f])[r];
                    if (v == v) present.emplace_back(v, false);
                }
                if (present.size() < 2) continue;
                std::sort(present.begin(), present.end());
                double total_p = 0.0;
                for (const auto& [v, pos] : present) total_p += pos ? 1.0 : 0.0;
                double total_n = static_cast<double>(present.size()) - total_p;

                double p_left = 0.0;
                double n_left = 0.0;
                for (std::size_t i = 0; i + 1 < present.size(); ++i) {
                    if (present[i].second) {
                        p_left += 1.0;
                    } else {
                        n_left += 1.0;
                    }
                    if (present[i].first == present[i + 1].first) continue;
                    double threshold =
                        present[i].first + (present[i + 1].first - present[i].first) / 2.0;
                    if (p_left > 0.0) {
                        GrowCandidate cand;
                        cand.found = true;
                        cand.gain = p_left * (log2_ratio(p_left, n_left) - base);
                        cand.condition = {static_cast<int>(f), RuleCondition::Op::le, 0,
                                          threshold};
                        if (cand.gain > 0.0 && candidate_beats(cand, best)) best = cand;
                    }
                    double p_right = total_p - p_left;
                    double n_right = total_n - n_left;
                    if (p_right > 0.0) {
                        GrowCandidate cand;
                        cand.found = true;
                        cand.gain = p_right * (log2_ratio(p_right, n_right) - base);
                        cand.condition = {static_cast<int>(f), RuleCondition::Op::ge, 0,
                                          threshold};
                        if (cand.gain > 0.0 && candidate_beats(cand, best)) best = cand;
                    }
                }
            }
        }
        return best;
    }

    Rule grow(std::vector<std::size_t> covered_pos, std::vector<std::size_t> covered_neg,
              Rule rule) const {
        auto filter = [&](const RuleCondition& cond, std::vector<std::size_t>& rows) {
            std::vector<std::size_t> kept;
            kept.reserve(rows.size());
            for (std::size_t r : rows) {
                if (condition_matches(cond, view, r)) kept.push_back(r);
            }
            rows = std::move(kept);
        };
        for (const auto& cond : rule.conditions) {
            filter(cond, covered_pos);
            filter(cond, covered_neg);
        }
        while (!covered_neg.empty()) {
            GrowCandidate cand = best_condition(covered_pos, covered_neg);
            if (!cand.found || cand.gain <= 0.0) break;
            rule.conditions.push_back(cand.condition);
            filter(cand.condition, covered_pos);
            filter(cand.condition, covered_neg);
        }
        return rule;
    }

    Rule prune(Rule rule, const std::vector<std::size_t>& prune_pos,
               const std::vector<std::size_t>& prune_neg) const {
        // Delete a trailing run of conditions to maximize (p - n) / (p + n)
        // on the pruning split; ties keep the shorter rule.
        if (prune_pos.empty() && prune_neg.empty()) return rule;
        double best_value = -2.0;
        std::size_t best_len = 0;
        for (std::size_t len = 0; len <= rule.conditions.size(); ++len) {
            Rule prefix;
            prefix.conditions.assign(rule.conditions.begin(),
                                     rule.conditions.begin() + static_cast<long>(len));
            double p = 0.0;
            double n = 0.0;
            for (std::size_t r : prune_pos) {
                if (rule_matches(prefix, view, r)) p += 1.0;
            }
            for (std::size_t r : prune_neg) {
                if (rule_matches(prefix, view, r)) n += 1.0;
            }
            double value = (p + n) > 0.0 ? (p - n) / (p + n) : -1.0;
            if (value > best_value + 1e-12) {
                best_value = value;
                best_len = len;
            }
        }
        rule.conditions.resize(best_len);
        return rule;
    }

    double theory_dl(const Rule& rule) const {
        double k = static_cast<double>(rule.conditions.size());
        if (k == 0.0) return 0.0;
        double tdl = std::log2(k);
        if (k > 1.0) tdl += 2.0 * std::log2(std::max(tdl, 1e-12));
        tdl += subset_dl(total_conditions, k, k / total_conditions);
        return 0.5 * tdl;
    }

    static double subset_dl(double t, double k, double p) {
        double bits = 0.0;
        if (p > 0.0) bits -= k * std::log2(p);
        if (p < 1.0) bits -= (t - k) * std::log2(1.0 - p);
        return bits;
    }

    static double data_dl(double cover, double uncover, double fp, double fn) {
        constexpr double exp_fp_over_err = 0.5;
        double bits = std::log2(cover + uncover + 1.0);
        if (cover > uncover) {
            double exp_err = exp_fp_over_err * (fp + fn);
            bits += subset_dl(cover, fp, cover > 0.0 ? exp_err / cover : 0.0);
            if (uncover > 0.0) bits += subset_dl(uncover, fn, fn / uncover);
        } else {
            double exp_err = (1.0 - exp_fp_over_err) * (fp + fn);
            if (cover > 0.0) bits += subset_dl(cover, fp, fp / cover);
            if (uncover > 0.0)
                bits += subset_dl(uncover, fn, exp_err / uncover);
        }
        return bits;
    }

    double ruleset_dl(const std::vector<Rule>& rules,
                      const std::vector<std::size_t>& pos,
                      const std::vector<std::size_t>& neg) const {
        double cover = 0.0;
        double fp = 0.0;
        double fn = 0.0;
        auto covered = [&](std::size_t r) {
            for (const auto& rule : rules) {
                if (rule_matches(rule, view, r)) return true;
            }
            return false;
        };
        for (std::size_t r : pos) {
            if (covered(r)) {
                cover += 1.0;
            } else {
                fn += 1.0;
            }
        }
        for (std::size_t r : neg) {
            if (covered(r)) {
                cover += 1.0;
                fp += 1.0;
            }
        }
        double total = static_cast<double>(pos.size() + neg.size());
        double bits = data_dl(cover, total - cover, fp, fn);
        for (const auto& rule : rules) bits += theory_dl(rule);
        return bits;
    }

    // Stratified 2/3 grow, 1/3 prune split of the current coverage.
    void split_rows(const std::vector<std::size_t>& rows,
                    std::vector<std::size_t>& grow_part,
                    std::vector<std::size_t>& prune_part) {
        std::vector<std::size_t> shuffled = rows;
        rng.shuffle(shuffled);
        for (std::size_t i = 0; i < shuffled.size(); ++i) {
            if (i % 3 == 2) {
                prune_part.push_back(shuffled[i]);
            } else {
                grow_part.push_back(shuffled[i]);
            }
        }
        std::sort(grow_part.begin(), grow_part.end());
        std::sort(prune_part.begin(), prune_part.end());
    }

    void remove_covered(const Rule& rule, std::vector<std::size_t>& rows) const {
        std::vector<std::size_t> kept;
        kept.reserve(rows.size());
        for (std::size_t r : rows) {
            if (!rule_matches(rule, view, r)) kept.push_back(r);
        }
        rows = std::move(kept);
    }

    std::vector<Rule> learn(std::vector<std::size_t> pos, std::vector<std::size_t> neg,
                            const std::vector<std::size_t>& all_pos,
                            const std::vector<std::size_t>& all_neg,
                            std::vector<Rule> rules) {
        double min_dl = ruleset_dl(rules, all_pos, all_neg);
        while (!pos.empty()) {
            std::vector<std::size_t> grow_pos, prune_pos, grow_neg, prune_neg;
            split_rows(pos, grow_pos, prune_pos);
            split_rows(neg, grow_neg, prune_neg);

            Rule rule;
            rule.predicted_class = target;
            rule = grow(grow_pos, grow_neg, std::move(rule));
            rule = prune(std::move(rule), prune_pos, prune_neg);

            std::vector<Rule> candidate = rules;
            candidate.push_back(rule);
            double dl = ruleset_dl(candidate, all_pos, all_neg);
            if (dl < min_dl) min_dl = dl;
            if (dl > min_dl + kDlStopMargin) break;

            // Error-rate stop on the pruning split.
            double p = 0.0;
            double n = 0.0;
            for (std::size_t r : prune_pos) {
                if (rule_matches(rule, view, r)) p += 1.0;
            }
            for (std::size_t r : prune_neg) {
                if (rule_matches(rule, view, r)) n += 1.0;
            }
            if (p + n > 0.0 && n >= p) break;

            std::size_t pos_before = pos.size();
            remove_covered(rule, pos);
            remove_covered(rule, neg);
            if (pos.size() == pos_before) break;  // rule covers no positives

            rules.push_back(std::move(rule));
        }
        return rules;
    }

    std::vector<Rule> optimize(std::vector<Rule> rules,
                               const std::vector<std::size_t>& all_pos,
                               const std::vector<std::size_t>& all_neg) {
        for (std::size_t i = 0; i < rules.size(); ++i) {
            // Context: rows not covered by the earlier rules.
            std::vector<std::size_t> ctx_pos = all_pos;
            std::vector<std::size_t> ctx_neg = all_neg;
            for (std::size_t j = 0; j < i; ++j) {
                remove_covered(rules[j], ctx_pos);
                remove_covered(rules[j], ctx_neg);
            }
            if (ctx_pos.empty()) break;

            std::vector<std::size_t> grow_pos, prune_pos, grow_neg, prune_neg;
            split_rows(ctx_pos, grow_pos, prune_pos);
            split_rows(ctx_neg, grow_neg, prune_neg);

            Rule replacement;
            replacement.predicted_class = target;
            replacement = grow(grow_pos, grow_neg, std::move(replacement));
            replacement = prune(std::move(replacement), prune_pos, prune_neg);

            Rule revision = rules[i];
            revision = grow(grow_pos, grow_neg, std::move(revision));
            revision = prune(std::move(revision), prune_pos, prune_neg);

            double best_dl = 0.0;
            std::size_t best_variant = 0;
            const Rule* variants[3] = {&rules[i], &replacement, &revision};
            for (std::size_t v = 0; v < 3; ++v) {
                std::vector<Rule> candidate = rules;
                candidate[i] = *variants[v];
                double dl = ruleset_dl(candidate, all_pos, all_neg);
                if (v == 0 || dl < best_dl - 1e-9) {
                    best_dl = dl;
                    best_variant = v;
                }
            }
            rules[i] = *variants[best_variant];
        }

        // Cover residual positives with fresh rules.
        std::vector<std::size_t> residual_pos = all_pos;
        std::vector<std::size_t> residual_neg = all_neg;
        for (const auto& rule : rules) {
            remove_covered(rule, residual_pos);
            remove_covered(rule, residual_neg);
        }
        if (!residual_pos.empty()) {
            rules = learn(std::move(residual_pos), std::move(residual_neg), all_pos,
                          all_neg, std::move(rules));
        }
        return rules;
    }
};

}  // namespace

std::unique_ptr<RipperModel> train_ripper(const TrainView& view,
                                          const RipperConfig& config,
                                          std::uint64_t seed) {
    if (view.rows == 0) throw EmptyTableError();
    if (config.optimization_runs < 0)
        throw InvalidConfigError("optimization_runs must be >= 0");

    auto model = std::make_unique<RipperModel>();
    model->kind = LearnerKind::ripper;
    model->class_labels = view.class_labels;
    model->features = view.schemas;
    model->train_seed = seed;
    model->hyperparameters = {{"optimization_runs", config.optimization_runs}};

    const std::size_t n_classes = view.class_labels.size();
    std::vector<std::int64_t> class_counts(n_classes, 0);
    for (auto c : view.class_codes) ++class_counts[static_cast<std::size_t>(c)];

    // Classes from rarest to most frequent; the most frequent is the default.
    std::vector<std::int32_t> order;
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (class_counts[c] > 0) order.push_back(static_cast<std::int32_t>(c));
    }
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        auto ca = class_counts[static_cast<std::size_t>(a)];
        auto cb = class_counts[static_cast<std::size_t>(b)];
        if (ca != cb) return ca < cb;
        return view.class_labels[static_cast<std::size_t>(a)] <
               view.class_labels[static_cast<std::size_t>(b)];
    });

    double total_conditions = 0.0;
    for (std::size_t f = 0; f < view.feature_count(); ++f) {
        if (view.schemas[f].kind == ColumnKind::nominal) {
            total_conditions += static_cast<double>(view.schemas[f].values.size());
        } else {
            std::vector<double> distinct;
            for (double v : *view.numeric[f]) {
                if (v == v) distinct.push_back(v);
            }
            std::sort(distinct.begin(), distinct.end());
            distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
            total_conditions += 2.0 * static_cast<double>(distinct.size());
        }
    }
    if (total_conditions < 1.0) total_conditions = 1.0;

    std::vector<std::size_t> remaining(view.rows);
    for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;

    Rng rng(derive_seed(seed, "ripper"));
    for (std::size_t oi = 0; oi + 1 < order.size(); ++oi) {
        std::int32_t target = order[oi];
        std::vector<std::size_t> pos;
        std::vector<std::size_t> neg;
        for (std::size_t r : remaining) {
            (view.class_codes[r] == target ? pos : neg).push_back(r);
        }
        if (pos.empty()) continue;

        ClassLearner learner{view, target, rng, total_conditions};
        std::vector<Rule> class_rules =
            learner.learn(pos, neg, pos, neg, {});
        for (int run = 0; run < config.optimization_runs; ++run) {
            class_rules = learner.optimize(std::move(class_rules), pos, neg);
        }

        // Remove rows covered by this class's rules from the pool.
        std::vector<std::size_t> still;
        still.reserve(remaining.size());
        for (std::size_t r : remaining) {
            bool covered = false;
            for (const auto& rule : class_rules) {
                if (rule_matches(rule, view, r)) {
                    covered = true;
                    break;
                }
            }
            if (!covered) still.push_back(r);
        }
        remaining = std::move(still);
        for (auto& rule : class_rules) model->rules.push_back(std::move(rule));
    }

    model->default_class = order.empty() ? 0 : order.back();

    // Sequential coverage counts over the full training set.
    for (auto& rule : model->rules) rule.coverage.assign(n_classes, 0);
    model->default_coverage.assign(n_classes, 0);
    for (std::size_t r = 0; r < view.rows; ++r) {
        bool matched = false;
        for (auto& rule : model->rules) {
            if (rule_matches(rule, view, r)) {
                ++rule.coverage[static_cast<std::size_t>(view.class_codes[r])];
                matched = true;
                break;
            }
        }
        if (!matched)
            ++model->default_coverage[static_cast<std::size_t>(view.class_codes[r])];
    }
    bool any_default = false;
    for (auto c : model->default_coverage) any_default |= c > 0;
    if (!any_default) model->default_coverage = class_counts;
    return model;
}

namespace {

bool encoded_condition_matches(const RuleCondition& cond, const Model& model,
                               const EncodedTable& data, std::size_t row) {
    const std::size_t f = static_cast<std::size_t>(cond.feature);
    if (model.features[f].kind == ColumnKind::nominal) {
        std::int32_t code = data.nominal[f][row];
        return code >= 0 && code == cond.value;
    }
    double v = (*data.numeric[f])[row];
    if (v != v) return false;
    return cond.op == RuleCondition::Op::le ? v <= cond.threshold : v >= cond.threshold;
}

ClassDistribution laplace_distribution(const std::vector<std::int64_t>& counts) {
    ClassDistribution dist;
    dist.probabilities.resize(counts.size());
    std::int64_t total = 0;
    for (auto c : counts) total += c;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        dist.probabilities[i] = (static_cast<double>(counts[i]) + 1.0) /
                                (static_cast<double>(total) +
                                 static_cast<double>(counts.size()));
    }
    return dist;
}

}  // namespace

ClassDistribution RipperModel::predict_encoded(const EncodedTable& data,
                                               std::size_t row) const {
    for (const auto& rule : rules) {
        bool matched = true;
        for (const auto& cond : rule.conditions) {
            if (!encoded_condition_matches(cond, *this, data, row)) {
                matched = false;
                break;
            }
        }
        if (matched) return laplace_distribution(rule.coverage);
    }
    return laplace_distribution(default_coverage);
}

nlohmann::json RipperModel::params_to_json() const {
    nlohmann::json rule_array = nlohmann::json::array();
    for (const auto& rule : rules) {
        nlohmann::json conds = nlohmann::json::array();
        for (const auto& cond : rule.conditions) {
            conds.push_back({{"feature", cond.feature},
                             {"op", cond.op == RuleCondition::Op::eq
                                        ? "eq"
                                        : (cond.op == RuleCondition::Op::le ? "le" : "ge")},
                             {"value", cond.value},
                             {"threshold", cond.threshold}});
        }
        rule_array.push_back({{"conditions", std::move(conds)},
                              {"class", rule.predicted_class},
                              {"coverage", rule.coverage}});
    }
    return nlohmann::json{{"rules", std::move(rule_array)},
                          {"default_class", default_class},
                          {"default_coverage", default_coverage}};
}

void RipperModel::params_from_json(const nlohmann::json& j) {
    rules.clear();
    for (const auto& item : j.at("rules")) {
        Rule rule;
        for (const auto& c : item.at("conditions")) {
            RuleCondition cond;
            cond.feature = c.at("feature").get<int>();
            std::string op = c.at("op").get<std::string>();
            cond.op = op == "eq" ? RuleCondition::Op::eq
                                 : (op == "le" ? RuleCondition::Op::le
                                               : RuleCondition::Op::ge);
            cond.value = c.at("value").get<std::int32_t>();
            cond.threshold = c.at("threshold").get<double>();
            rule.conditions.push_back(cond);
        }
        rule.predicted_class = item.at("class").get<std::int32_t>();
        rule.coverage = item.at("coverage").get<std::vector<std::int64_t>>();
        rules.push_back(std::move(rule));
    }
    default_class = j.at("default_class").get<std::int32_t>();
    default_coverage = j.at("default_coverage").get<std::vector<std::int64_t>>();
}

}  // namespace clicklab
