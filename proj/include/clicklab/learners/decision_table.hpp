#pragma once

#include <map>

#include "clicklab/learners/model.hpp"

namespace clicklab {

// Lookup classifier over a learned feature subset. The schema is chosen by
// best-first search maximizing leave-one-out accuracy; numeric features are
// binned with the shared discretization. Keys never seen in training fall
// back to the global majority.
class DecisionTableModel : public Model {
public:
    std::vector<std::size_t> selected;  // feature indices, ascending
    std::map<std::string, std::vector<std::int64_t>> lookup;  // key -> class counts
    std::vector<std::int64_t> global_counts;

    ClassDistribution predict_encoded(const EncodedTable& data,
                                      std::size_t row) const override;
    nlohmann::json params_to_json() const override;
    void params_from_json(const nlohmann::json& j) override;
};

struct DecisionTableConfig {
    int max_stale = 5;  // best-first expansions without improvement
};

std::unique_ptr<DecisionTableModel> train_decision_table(const TrainView& view,
                                                         const DecisionTableConfig& config,
                                                         std::uint64_t seed);

}  // namespace clicklab
