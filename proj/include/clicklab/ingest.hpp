#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "clicklab/click_event.hpp"
#include "clicklab/feature_table.hpp"

namespace clicklab {

// Column layout of one dump file. Canonical fields are mapped by name;
// unknown columns are retained as generic nominal columns.
struct SchemaMap {
    std::map<std::string, std::size_t> column_index_by_name;
    std::size_t declared_column_count = 0;
    std::vector<std::string> column_names;  // header order
    std::vector<std::string> extra_columns; // non-canonical names, header order

    std::size_t index_of(std::string_view name) const;
};

SchemaMap validate_header(std::string_view header_row);

struct RejectedLine {
    std::size_t line_number;  // 1-based within the file, header = line 1
    std::string reason;
};

struct ParseResult {
    std::vector<ClickEvent> events;
    std::vector<RejectedLine> rejects;
};

// Parses data lines (everything after the header). Every line yields either
// one event or one reject entry; the stream is never aborted.
ParseResult parse_dump(const std::vector<std::string>& lines, const SchemaMap& schema);

// Serializes an event to the dump dialect in canonical field order.
std::string serialize_event(const ClickEvent& event);
std::string canonical_header();

std::vector<ClickEvent> filter_crawlers(const std::vector<ClickEvent>& events);

struct PruneReport {
    std::vector<std::string> constant_columns;
    std::vector<std::vector<std::string>> redundant_groups;
    std::vector<std::string> kept_columns;

    std::string to_json() const;
};

// Drops constant columns, then keeps the lexicographically first member of
// every set of row-identical columns.
std::pair<FeatureTable, PruneReport> prune_columns(const FeatureTable& table);

// Streaming variant of the prune analysis for raw dump rows: feed each row's
// decoded fields, then call report(). Used when files are too large to hold
// as a FeatureTable.
class PruneScanner {
public:
    explicit PruneScanner(std::vector<std::string> column_names);
    void add_row(const std::vector<std::string_view>& fields);
    PruneReport report() const;
    std::size_t rows_seen() const { return rows_; }

private:
    std::vector<std::string> names_;
    std::vector<std::vector<std::size_t>> groups_;  // refined by row values
    std::vector<bool> constant_;
    std::vector<std::string> first_value_;
    std::size_t rows_ = 0;
};

// Reads every column of a dump (canonical and extras) as nominal strings.
// The missing token becomes a missing cell. Rows whose field count mismatches
// the header are skipped, mirroring parse_dump rejects.
FeatureTable read_raw_table(const std::vector<std::string>& lines, const SchemaMap& schema);

}  // namespace clicklab
