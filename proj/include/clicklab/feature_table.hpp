#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace clicklab {

enum class ColumnKind { nominal, numeric };

// One typed column. Nominal values are dictionary-encoded; code -1 marks a
// missing cell. Numeric cells use NaN for missing.
struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::nominal;
    std::vector<std::int32_t> codes;
    std::vector<std::string> dict;
    std::vector<double> numbers;

    static Column nominal(std::string name,
                          const std::vector<std::optional<std::string>>& values);
    static Column numeric(std::string name,
                          const std::vector<std::optional<double>>& values);

    std::size_t size() const {
        return kind == ColumnKind::nominal ? codes.size() : numbers.size();
    }
    bool missing_at(std::size_t row) const {
        return kind == ColumnKind::nominal ? codes[row] < 0
                                           : numbers[row] != numbers[row];
    }
    // Nominal cell as text; empty view for missing.
    std::string_view text_at(std::size_t row) const {
        if (kind != ColumnKind::nominal || codes[row] < 0) return {};
        return dict[static_cast<std::size_t>(codes[row])];
    }
    std::size_t distinct_values() const { return dict.size(); }

    Column select(const std::vector<std::size_t>& rows) const;
};

inline constexpr double kMissingNumber = std::numeric_limits<double>::quiet_NaN();

// Columnar dataset with a nominal class column; the input to feature
// selection and all learners.
struct FeatureTable {
    std::vector<Column> columns;
    Column class_column;
    std::size_t row_count = 0;

    void add_column(Column col);
    void set_class(Column col);

    std::optional<std::size_t> column_index(std::string_view name) const;
    const Column& column(std::string_view name) const;

    // Distinct observed class labels, sorted; the canonical label order used
    // by every model built from this table.
    std::vector<std::string> class_labels() const;

    FeatureTable select_rows(const std::vector<std::size_t>& rows) const;
};

// Builds a dictionary-encoded nominal column directly from codes produced by
// an external encoder (used by the discretizer).
Column nominal_from_codes(std::string name, std::vector<std::int32_t> codes,
                          std::vector<std::string> dict);

}  // namespace clicklab
