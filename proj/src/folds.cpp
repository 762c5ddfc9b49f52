#include "clicklab/folds.hpp"

#include <algorithm>
#include <map>

#include "clicklab/errors.hpp"
#include "clicklab/rng.hpp"

namespace clicklab {

std::vector<std::size_t> FoldAssignment::rows_in_fold(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < fold_index.size(); ++r) {
        if (fold_index[r] == fold) rows.push_back(r);
    }
    return rows;
}

std::vector<std::size_t> FoldAssignment::rows_not_in_fold(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < fold_index.size(); ++r) {
        if (fold_index[r] != fold) rows.push_back(r);
    }
    return rows;
}

FoldAssignment stratified_folds_codes(const std::vector<std::int32_t>& class_codes,
                                      std::size_t k, std::uint64_t seed) {
    if (k < 2) throw InvalidConfigError("fold count must be >= 2");
    if (class_codes.size() < k) throw TooFewRowsError(class_codes.size(), k);

    // Group rows by class (code order), shuffle within each class, then deal
    // the concatenated list round-robin. Each class occupies a contiguous run,
    // so both total fold sizes and per-class fold counts differ by <= 1.
    std::map<std::int32_t, std::vector<std::size_t>> by_class;
    for (std::size_t r = 0; r < class_codes.size(); ++r) {
        by_class[class_codes[r]].push_back(r);
    }
    FoldAssignment assignment;
    assignment.k = k;
    assignment.seed = seed;
    assignment.fold_index.assign(class_codes.size(), 0);

    std::size_t position = 0;
    for (auto& [code, rows] : by_class) {
        Rng rng(derive_seed(seed, "fold_class", static_cast<std::uint64_t>(code)));
        rng.shuffle(rows);
        for (std::size_t r : rows) {
            assignment.fold_index[r] = position % k;
            ++position;
        }
    }
    return assignment;
}

FoldAssignment stratified_folds(const FeatureTable& table, std::size_t k,
                                std::uint64_t seed) {
    if (table.row_count == 0) throw EmptyTableError();
    // Canonical class codes so the assignment is invariant to dictionary order.
    std::vector<std::string> labels = table.class_labels();
    std::map<std::string_view, std::int32_t> index;
    for (std::size_t i = 0; i < labels.size(); ++i)
        index.emplace(labels[i], static_cast<std::int32_t>(i));
    std::vector<std::int32_t> codes;
    codes.reserve(table.row_count);
    for (std::size_t r = 0; r < table.row_count; ++r) {
        if (table.class_column.codes[r] < 0)
            throw SchemaMismatchError("class label missing at row " + std::to_string(r));
        codes.push_back(index.at(table.class_column.text_at(r)));
    }
    return stratified_folds_codes(codes, k, seed);
}

}  // namespace clicklab
