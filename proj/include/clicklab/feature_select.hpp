#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "clicklab/feature_table.hpp"

namespace clicklab {

enum class ScoreMethod { chi2, info_gain, gain_ratio, one_r, symmetric_uncertainty };

std::string_view to_string(ScoreMethod m);
std::optional<ScoreMethod> score_method_from(std::string_view s);
const std::vector<ScoreMethod>& all_score_methods();

// Equal-frequency discretization of a numeric column. Cut points are the
// sorted-order values at the bin boundaries, deduplicated; a value lands in
// bin "number of cuts <= value". Missing cells keep code -1.
struct Discretized {
    std::vector<std::int32_t> bins;  // -1 = missing
    std::vector<double> cuts;        // ascending; bins.size() <= cuts.size()+1
    std::int32_t bin_count = 1;
};

Discretized equal_frequency_bins(const std::vector<double>& values, int bins);
std::int32_t bin_for(const std::vector<double>& cuts, double value);

// Contingency-table scorers. Inputs are dictionary codes with -1 for missing;
// missing values form their own category. A class column with fewer than two
// distinct values yields score 0.
double chi_squared(const std::vector<std::int32_t>& feature,
                   const std::vector<std::int32_t>& cls);
double info_gain(const std::vector<std::int32_t>& feature,
                 const std::vector<std::int32_t>& cls);
double gain_ratio(const std::vector<std::int32_t>& feature,
                  const std::vector<std::int32_t>& cls);
double one_r(const std::vector<std::int32_t>& feature,
             const std::vector<std::int32_t>& cls,
             const std::vector<std::string>& class_dict);
double symmetric_uncertainty(const std::vector<std::int32_t>& feature,
                             const std::vector<std::int32_t>& cls);

struct RankedFeatures {
    ScoreMethod method;
    std::vector<std::pair<std::string, double>> entries;  // descending score
};

inline constexpr int kDiscretizeBins = 10;

// Scores every predictor column against the class. Numeric columns are
// discretized with 10 equal-frequency bins first. Ties break by name.
RankedFeatures rank(const FeatureTable& table, ScoreMethod method);

// Features appearing in the top ceil(top_fraction * M) entries of at least 3
// of the given rankings, where M is the column count.
std::set<std::string> consensus(const std::vector<RankedFeatures>& rankings,
                                double top_fraction);

std::string rankings_to_csv(const std::vector<RankedFeatures>& rankings);
std::string consensus_to_json(const std::set<std::string>& features);

}  // namespace clicklab
