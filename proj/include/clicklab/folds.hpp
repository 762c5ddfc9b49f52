#pragma once

#include <cstdint>
#include <vector>

#include "clicklab/feature_table.hpp"

namespace clicklab {

// Stratified k-fold assignment: within each class, rows are shuffled by the
// seed and dealt round-robin, so fold sizes and per-class counts across folds
// each differ by at most one.
struct FoldAssignment {
    std::vector<std::size_t> fold_index;  // per row, in [0, k)
    std::size_t k = 0;
    std::uint64_t seed = 0;

    std::vector<std::size_t> rows_in_fold(std::size_t fold) const;
    std::vector<std::size_t> rows_not_in_fold(std::size_t fold) const;
};

FoldAssignment stratified_folds(const FeatureTable& table, std::size_t k,
                                std::uint64_t seed);

// Same assignment computed from raw class codes (used for internal stacking
// folds where no FeatureTable exists).
FoldAssignment stratified_folds_codes(const std::vector<std::int32_t>& class_codes,
                                      std::size_t k, std::uint64_t seed);

}  // namespace clicklab
