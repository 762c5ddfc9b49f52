#include "clicklab/feature_table.hpp"

#include <algorithm>

#include "clicklab/errors.hpp"

namespace clicklab {

Column Column::nominal(std::string name,
                       const std::vector<std::optional<std::string>>& values) {
    Column col;
    col.name = std::move(name);
    col.kind = ColumnKind::nominal;
    col.codes.reserve(values.size());
    std::unordered_map<std::string, std::int32_t> index;
    for (const auto& v : values) {
        if (!v.has_value()) {
            col.codes.push_back(-1);
            continue;
        }
        auto [it, inserted] =
            index.emplace(*v, static_cast<std::int32_t>(col.dict.size()));
        if (inserted) col.dict.push_back(*v);
        col.codes.push_back(it->second);
    }
    return col;
}

Column Column::numeric(std::string name,
                       const std::vector<std::optional<double>>& values) {
    Column col;
    col.name = std::move(name);
    col.kind = ColumnKind::numeric;
    col.numbers.reserve(values.size());
    for (const auto& v : values) {
        col.numbers.push_back(v.has_value() ? *v : kMissingNumber);
    }
    return col;
}

Column Column::select(const std::vector<std::size_t>& rows) const {
    Column out;
    out.name = name;
    out.kind = kind;
    out.dict = dict;
    if (kind == ColumnKind::nominal) {
        out.codes.reserve(rows.size());
        for (std::size_t r : rows) out.codes.push_back(codes[r]);
    } else {
        out.numbers.reserve(rows.size());
        for (std::size_t r : rows) out.numbers.push_back(numbers[r]);
    }
    return out;
}

void FeatureTable::add_column(Column col) {
    if (columns.empty() && class_column.size() == 0) {
        row_count = col.size();
    } else if (col.size() != row_count) {
        throw SchemaMismatchError("column " + col.name + " has " +
                                  std::to_string(col.size()) + " rows, table has " +
                                  std::to_string(row_count));
    }
    columns.push_back(std::move(col));
}

void FeatureTable::set_class(Column col) {
    if (col.kind != ColumnKind::nominal)
        throw SchemaMismatchError("class column must be nominal");
    if (columns.empty()) {
        row_count = col.size();
    } else if (col.size() != row_count) {
        throw SchemaMismatchError("class column size mismatch");
    }
    class_column = std::move(col);
}

std::optional<std::size_t> FeatureTable::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].name == name) return i;
    }
    return std::nullopt;
}

const Column& FeatureTable::column(std::string_view name) const {
    auto idx = column_index(name);
    if (!idx) throw SchemaMismatchError("no such column: " + std::string(name));
    return columns[*idx];
}

std::vector<std::string> FeatureTable::class_labels() const {
    std::vector<std::string> labels = class_column.dict;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

FeatureTable FeatureTable::select_rows(const std::vector<std::size_t>& rows) const {
    FeatureTable out;
    out.row_count = rows.size();
    out.columns.reserve(columns.size());
    for (const auto& col : columns) out.columns.push_back(col.select(rows));
    out.class_column = class_column.select(rows);
    return out;
}

Column nominal_from_codes(std::string name, std::vector<std::int32_t> codes,
                          std::vector<std::string> dict) {
    Column col;
    col.name = std::move(name);
    col.kind = ColumnKind::nominal;
    col.codes = std::move(codes);
    col.dict = std::move(dict);
    return col;
}

}  // namespace clicklab
