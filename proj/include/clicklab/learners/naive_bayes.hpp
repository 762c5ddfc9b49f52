#pragma once

#include <span>

#include "clicklab/learners/model.hpp"

namespace clicklab {

// Multinomial naive Bayes over nominal categories. Numeric features share the
// equal-frequency discretization used by feature selection; each feature
// reserves one category for missing cells and a smoothing floor for values
// never seen in training.
class NaiveBayesModel : public Model {
public:
    // counts[f] has (category_count(f) + 1) rows of class counts; the last
    // row is the missing category.
    std::vector<std::vector<std::vector<std::int64_t>>> counts;
    std::vector<std::int64_t> class_counts;

    ClassDistribution predict_encoded(const EncodedTable& data,
                                      std::size_t row) const override;
    // Prediction for an all-numeric, fully observed row (stacking meta input).
    ClassDistribution predict_numeric_row(std::span<const double> values) const;

    nlohmann::json params_to_json() const override;
    void params_from_json(const nlohmann::json& j) override;

    std::size_t category_count(std::size_t f) const;
};

std::unique_ptr<NaiveBayesModel> train_naive_bayes(const TrainView& view,
                                                   std::uint64_t seed);

}  // namespace clicklab
