#pragma once

#include "clicklab/learners/model.hpp"
#include "clicklab/rng.hpp"

namespace clicklab {

// One node of a decision tree. feature < 0 marks a leaf. Nominal splits are
// multiway with one child slot per canonical value code plus an optional
// missing branch; numeric splits are binary at `threshold` with missing rows
// routed to the stored side.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    bool missing_goes_left = true;            // numeric splits
    std::vector<int> children;                // nominal: per value; numeric: {left,right}
    int missing_child = -1;                   // nominal missing branch
    std::vector<std::int64_t> class_counts;   // training counts at this node
};

struct TreeConfig {
    int min_leaf = 2;
    bool prune = true;
    double prune_confidence = 0.25;
    // When > 0, sample this many candidate features at every node (random
    // forest behavior). 0 means all available features are candidates.
    int random_candidates = 0;
    // When non-empty, restrict the tree to these feature indices.
    std::vector<std::size_t> feature_subset;
};

class TreeModel : public Model {
public:
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    ClassDistribution predict_encoded(const EncodedTable& data,
                                      std::size_t row) const override;
    nlohmann::json params_to_json() const override;
    void params_from_json(const nlohmann::json& j) override;

    std::size_t depth() const;
    std::size_t leaf_count() const;
};

std::unique_ptr<TreeModel> train_c45(const TrainView& view, const TreeConfig& config,
                                     std::uint64_t seed);

// Internal entry point shared with the ensembles: builds a tree over the
// given training rows, drawing any per-node feature sampling from rng.
std::unique_ptr<TreeModel> build_tree(const TrainView& view,
                                      const std::vector<std::size_t>& rows,
                                      const TreeConfig& config, Rng& rng,
                                      std::uint64_t seed);

}  // namespace clicklab
