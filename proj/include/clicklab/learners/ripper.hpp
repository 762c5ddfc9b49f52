#pragma once

#include "clicklab/learners/model.hpp"

namespace clicklab {

// One antecedent of a rule: an equality test on a nominal value or a
// threshold test on a numeric value. Tests fail on missing cells.
struct RuleCondition {
    enum class Op { eq, le, ge };
    int feature = 0;
    Op op = Op::eq;
    std::int32_t value = 0;   // nominal code
    double threshold = 0.0;   // numeric bound
};

struct Rule {
    std::vector<RuleCondition> conditions;
    std::int32_t predicted_class = 0;
    // Class counts of the training rows this rule fired on (sequential
    // coverage order); the prediction distribution.
    std::vector<std::int64_t> coverage;
};

// Ordered rule list learned class by class from rarest to most frequent, with
// grow/prune splits, description-length stopping, and optimization passes.
class RipperModel : public Model {
public:
    std::vector<Rule> rules;
    std::vector<std::int64_t> default_coverage;
    std::int32_t default_class = 0;

    ClassDistribution predict_encoded(const EncodedTable& data,
                                      std::size_t row) const override;
    nlohmann::json params_to_json() const override;
    void params_from_json(const nlohmann::json& j) override;
};

struct RipperConfig {
    int optimization_runs = 2;
};

std::unique_ptr<RipperModel> train_ripper(const TrainView& view,
                                          const RipperConfig& config,
                                          std::uint64_t seed);

}  // namespace clicklab
