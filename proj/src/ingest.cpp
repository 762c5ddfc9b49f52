#include "clicklab/ingest.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "clicklab/errors.hpp"
#include "clicklab/tsv.hpp"

namespace clicklab {

namespace {

const std::unordered_set<std::string>& canonical_set() {
    static const std::unordered_set<std::string> s(canonical_fields().begin(),
                                                   canonical_fields().end());
    return s;
}

std::string missing_or(const std::optional<std::string>& v) {
    return v.has_value() ? *v : std::string(kMissingToken);
}

std::string missing_or_int(const std::optional<std::int64_t>& v) {
    return v.has_value() ? std::to_string(*v) : std::string(kMissingToken);
}

}  // namespace

std::size_t SchemaMap::index_of(std::string_view name) const {
    auto it = column_index_by_name.find(std::string(name));
    if (it == column_index_by_name.end())
        throw MissingColumnError(std::string(name));
    return it->second;
}

SchemaMap validate_header(std::string_view header_row) {
    SchemaMap schema;
    auto fields = split_tsv(header_row);
    schema.declared_column_count = fields.size();
    for (std::size_t i = 0; i < fields.size(); ++i) {
        std::string name(fields[i]);
        auto [it, inserted] = schema.column_index_by_name.emplace(name, i);
        if (!inserted) throw DuplicateColumnError(name);
        schema.column_names.push_back(name);
        if (!canonical_set().count(name)) schema.extra_columns.push_back(name);
    }
    for (const auto& required : canonical_fields()) {
        if (!schema.column_index_by_name.count(required))
            throw MissingColumnError(required);
    }
    return schema;
}

namespace {

struct FieldCursor {
    const std::vector<std::string_view>& fields;
    const SchemaMap& schema;

    std::string_view raw(std::string_view name) const {
        return fields[schema.index_of(name)];
    }
    bool missing(std::string_view name) const { return is_missing(raw(name)); }
    std::string str(std::string_view name) const {
        auto f = raw(name);
        return is_missing(f) ? std::string() : std::string(f);
    }
    std::optional<std::string> opt_str(std::string_view name) const {
        auto f = raw(name);
        if (is_missing(f)) return std::nullopt;
        return std::string(f);
    }
};

// Returns an error reason, or empty string on success.
std::string parse_line(const std::vector<std::string_view>& fields,
                       const SchemaMap& schema, ClickEvent& out) {
    if (fields.size() != schema.declared_column_count) {
        return "field count " + std::to_string(fields.size()) + " != declared " +
               std::to_string(schema.declared_column_count);
    }
    FieldCursor cur{fields, schema};

    auto ts = parse_int64(cur.raw("timestamp"));
    if (!ts) return "malformed timestamp";
    if (*ts <= 0) return "timestamp must be strictly positive";
    out.timestamp = *ts;

    out.ip = cur.str("ip");
    if (out.ip.empty()) return "empty ip";

    out.channel = cur.str("channel");
    out.section = cur.str("section");
    out.subsection = cur.str("subsection");
    out.page_url = cur.str("page_url");
    out.story_title = cur.str("story_title");
    out.referrer_url = cur.str("referrer_url");
    out.referrer_type = cur.str("referrer_type");
    out.first_hit_page = cur.str("first_hit_page");
    out.first_hit_referrer = cur.str("first_hit_referrer");

    auto parse_opt_time = [&](std::string_view name,
                              std::optional<std::int64_t>& dst) -> std::string {
        auto f = cur.raw(name);
        if (is_missing(f)) {
            dst = std::nullopt;
            return {};
        }
        auto v = parse_int64(f);
        if (!v) return "malformed " + std::string(name);
        dst = *v;
        return {};
    };
    if (auto e = parse_opt_time("first_hit_time", out.first_hit_time); !e.empty()) return e;
    if (auto e = parse_opt_time("last_visit", out.last_visit); !e.empty()) return e;
    if (auto e = parse_opt_time("last_click", out.last_click); !e.empty()) return e;
    if (out.first_hit_time && *out.first_hit_time > out.timestamp)
        return "first_hit_time after timestamp";

    out.browser = cur.opt_str("browser");
    out.city = cur.opt_str("city");
    out.region = cur.opt_str("region");
    out.country = cur.opt_str("country");
    out.isp_domain = cur.opt_str("isp_domain");
    out.search_keywords = cur.opt_str("search_keywords");
    out.search_engine = cur.opt_str("search_engine");

    if (!cur.missing("search_page_num")) {
        auto v = parse_int64(cur.raw("search_page_num"));
        if (!v || *v < 1) return "search_page_num must be an integer >= 1";
        out.search_page_num = static_cast<int>(*v);
    } else {
        out.search_page_num = std::nullopt;
    }

    auto parse_bool = [&](std::string_view name, bool& dst) -> std::string {
        auto f = cur.raw(name);
        if (f == "1") {
            dst = true;
        } else if (f == "0") {
            dst = false;
        } else {
            return "malformed boolean " + std::string(name);
        }
        return {};
    };
    if (auto e = parse_bool("cookies_enabled", out.cookies_enabled); !e.empty()) return e;
    if (auto e = parse_bool("exclude_hit", out.exclude_hit); !e.empty()) return e;
    if (auto e = parse_bool("new_visit", out.new_visit); !e.empty()) return e;

    auto vn = parse_int64(cur.raw("visit_number"));
    if (!vn || *vn < 1) return "visit_number must be an integer >= 1";
    out.visit_number = static_cast<int>(*vn);

    auto freq = visit_frequency_from(cur.raw("frequency_of_visits"));
    if (!freq) return "unknown frequency_of_visits";
    out.frequency_of_visits = *freq;

    out.player_id = cur.opt_str("player_id");
    if (!cur.missing("progress_marker")) {
        auto v = parse_int64(cur.raw("progress_marker"));
        if (!v) return "malformed progress_marker";
        if (!is_valid_marker(static_cast<int>(*v)))
            return "marker outside {0,25,50,75,100}";
        out.progress_marker = static_cast<int>(*v);
    } else {
        out.progress_marker = std::nullopt;
    }
    if (out.progress_marker.has_value() != out.player_id.has_value())
        return "progress_marker and player_id must appear together";

    out.content_category = cur.opt_str("content_category");

    // Identity resolution: cookie token when cookies were on, raw IP when not.
    auto key = cur.raw("user_key");
    if (out.cookies_enabled && !is_missing(key)) {
        out.user_key = std::string(key);
    } else {
        out.user_key = out.ip;
    }
    return {};
}

}  // namespace

ParseResult parse_dump(const std::vector<std::string>& lines, const SchemaMap& schema) {
    ParseResult result;
    result.events.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        auto fields = split_tsv(line);
        ClickEvent event;
        std::string reason = parse_line(fields, schema, event);
        if (reason.empty()) {
            result.events.push_back(std::move(event));
        } else {
            // Header is line 1 of the file, so data line i is file line i+2.
            result.rejects.push_back({i + 2, std::move(reason)});
        }
    }
    return result;
}

std::string canonical_header() {
    std::vector<std::string> names(canonical_fields().begin(), canonical_fields().end());
    return join_tsv(names);
}

std::string serialize_event(const ClickEvent& e) {
    std::vector<std::string> fields;
    fields.reserve(canonical_fields().size());
    fields.push_back(e.user_key);
    fields.push_back(e.ip);
    fields.push_back(std::to_string(e.timestamp));
    fields.push_back(e.channel);
    fields.push_back(e.section);
    fields.push_back(e.subsection);
    fields.push_back(e.page_url);
    fields.push_back(e.story_title);
    fields.push_back(e.referrer_url);
    fields.push_back(e.referrer_type);
    fields.push_back(e.first_hit_page);
    fields.push_back(e.first_hit_referrer);
    fields.push_back(missing_or_int(e.first_hit_time));
    fields.push_back(missing_or_int(e.last_visit));
    fields.push_back(missing_or_int(e.last_click));
    fields.push_back(missing_or(e.browser));
    fields.push_back(missing_or(e.city));
    fields.push_back(missing_or(e.region));
    fields.push_back(missing_or(e.country));
    fields.push_back(missing_or(e.isp_domain));
    fields.push_back(missing_or(e.search_keywords));
    fields.push_back(missing_or(e.search_engine));
    fields.push_back(e.search_page_num ? std::to_string(*e.search_page_num)
                                       : std::string(kMissingToken));
    fields.push_back(e.cookies_enabled ? "1" : "0");
    fields.push_back(e.exclude_hit ? "1" : "0");
    fields.push_back(e.new_visit ? "1" : "0");
    fields.push_back(std::to_string(e.visit_number));
    fields.push_back(std::string(to_string(e.frequency_of_visits)));
    fields.push_back(missing_or(e.player_id));
    fields.push_back(e.progress_marker ? std::to_string(*e.progress_marker)
                                       : std::string(kMissingToken));
    fields.push_back(missing_or(e.content_category));
    return join_tsv(fields);
}

std::vector<ClickEvent> filter_crawlers(const std::vector<ClickEvent>& events) {
    std::vector<ClickEvent> kept;
    kept.reserve(events.size());
    for (const auto& e : events) {
        if (!e.exclude_hit) kept.push_back(e);
    }
    return kept;
}

std::string PruneReport::to_json() const {
    nlohmann::json j;
    j["constant_columns"] = constant_columns;
    j["redundant_groups"] = redundant_groups;
    j["kept_columns"] = kept_columns;
    return j.dump(2) + "\n";
}

PruneScanner::PruneScanner(std::vector<std::string> column_names)
    : names_(std::move(column_names)),
      constant_(names_.size(), true),
      first_value_(names_.size()) {
    std::vector<std::size_t> all(names_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    groups_.push_back(std::move(all));
}

void PruneScanner::add_row(const std::vector<std::string_view>& fields) {
    if (fields.size() != names_.size()) return;
    if (rows_ == 0) {
        for (std::size_t i = 0; i < names_.size(); ++i)
            first_value_[i] = std::string(fields[i]);
    } else {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (constant_[i] && fields[i] != first_value_[i]) constant_[i] = false;
        }
    }
    // Partition refinement: columns stay grouped only while their values
    // agree on every row seen so far.
    std::vector<std::vector<std::size_t>> refined;
    refined.reserve(groups_.size());
    for (auto& group : groups_) {
        if (group.size() == 1) {
            refined.push_back(std::move(group));
            continue;
        }
        std::unordered_map<std::string_view, std::vector<std::size_t>> by_value;
        for (std::size_t col : group) by_value[fields[col]].push_back(col);
        if (by_value.size() == 1) {
            refined.push_back(std::move(group));
            continue;
        }
        // Deterministic order: splits sorted by their smallest column index.
        std::vector<std::vector<std::size_t>> splits;
        for (auto& [_, cols] : by_value) splits.push_back(std::move(cols));
        std::sort(splits.begin(), splits.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
        for (auto& s : splits) refined.push_back(std::move(s));
    }
    groups_ = std::move(refined);
    ++rows_;
}

PruneReport PruneScanner::report() const {
    PruneReport report;
    if (rows_ == 0) throw EmptyTableError();

    std::vector<bool> is_constant(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) is_constant[i] = constant_[i];

    std::set<std::string> constants;
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (is_constant[i]) constants.insert(names_[i]);
    }
    report.constant_columns.assign(constants.begin(), constants.end());

    std::vector<bool> dropped(names_.size(), false);
    for (std::size_t i = 0; i < names_.size(); ++i) dropped[i] = is_constant[i];

    std::vector<std::vector<std::string>> groups;
    for (const auto& group : groups_) {
        std::vector<std::string> members;
        for (std::size_t col : group) {
            if (!is_constant[col]) members.push_back(names_[col]);
        }
        if (members.size() < 2) continue;
        std::sort(members.begin(), members.end());
        // Keep the lexicographically first member, drop the rest.
        for (std::size_t k = 1; k < members.size(); ++k) {
            for (std::size_t col = 0; col < names_.size(); ++col) {
                if (names_[col] == members[k]) dropped[col] = true;
            }
        }
        groups.push_back(std::move(members));
    }
    std::sort(groups.begin(), groups.end());
    report.redundant_groups = std::move(groups);

    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (!dropped[i]) report.kept_columns.push_back(names_[i]);
    }
    return report;
}

namespace {

std::string cell_as_text(const Column& col, std::size_t row) {
    if (col.missing_at(row)) return std::string(kMissingToken);
    if (col.kind == ColumnKind::nominal) return std::string(col.text_at(row));
    // Exact textual form for bit-identical numeric comparison.
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", col.numbers[row]);
    return buf;
}

}  // namespace

std::pair<FeatureTable, PruneReport> prune_columns(const FeatureTable& table) {
    if (table.row_count == 0) throw EmptyTableError();
    std::vector<std::string> names;
    names.reserve(table.columns.size());
    for (const auto& col : table.columns) names.push_back(col.name);

    PruneScanner scanner(names);
    std::vector<std::string> cells(table.columns.size());
    std::vector<std::string_view> views(table.columns.size());
    for (std::size_t r = 0; r < table.row_count; ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            cells[c] = cell_as_text(table.columns[c], r);
            views[c] = cells[c];
        }
        scanner.add_row(views);
    }
    PruneReport report = scanner.report();

    std::unordered_set<std::string> kept(report.kept_columns.begin(),
                                         report.kept_columns.end());
    FeatureTable pruned;
    pruned.row_count = table.row_count;
    for (const auto& col : table.columns) {
        if (kept.count(col.name)) pruned.columns.push_back(col);
    }
    pruned.class_column = table.class_column;
    return {std::move(pruned), std::move(report)};
}

FeatureTable read_raw_table(const std::vector<std::string>& lines,
                            const SchemaMap& schema) {
    std::vector<std::vector<std::optional<std::string>>> cells(
        schema.declared_column_count);
    for (const auto& line : lines) {
        if (line.empty()) continue;
        auto fields = split_tsv(line);
        if (fields.size() != schema.declared_column_count) continue;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (is_missing(fields[c])) {
                cells[c].push_back(std::nullopt);
            } else {
                cells[c].push_back(std::string(fields[c]));
            }
        }
    }
    FeatureTable table;
    for (std::size_t c = 0; c < schema.declared_column_count; ++c) {
        table.add_column(Column::nominal(schema.column_names[c], cells[c]));
    }
    return table;
}

}  // namespace clicklab
