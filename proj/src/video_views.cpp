#include "clicklab/video_views.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "clicklab/errors.hpp"
#include "clicklab/tsv.hpp"

namespace clicklab {

std::string_view to_string(ExitClass c) {
    switch (c) {
        case ExitClass::E0: return "E0";
        case ExitClass::E25: return "E25";
        case ExitClass::E50: return "E50";
        case ExitClass::E75: return "E75";
        case ExitClass::E100: return "E100";
    }
    return "E0";
}

std::optional<ExitClass> exit_class_from(std::string_view s) {
    if (s == "E0") return ExitClass::E0;
    if (s == "E25") return ExitClass::E25;
    if (s == "E50") return ExitClass::E50;
    if (s == "E75") return ExitClass::E75;
    if (s == "E100") return ExitClass::E100;
    return std::nullopt;
}

ExitClass exit_class_for_marker(int marker) {
    switch (marker) {
        case 0: return ExitClass::E0;
        case 25: return ExitClass::E25;
        case 50: return ExitClass::E50;
        case 75: return ExitClass::E75;
        case 100: return ExitClass::E100;
    }
    throw InvalidConfigError("marker outside {0,25,50,75,100}: " + std::to_string(marker));
}

int marker_of(ExitClass c) {
    switch (c) {
        case ExitClass::E0: return 0;
        case ExitClass::E25: return 25;
        case ExitClass::E50: return 50;
        case ExitClass::E75: return 75;
        case ExitClass::E100: return 100;
    }
    return 0;
}

bool to_binary(ExitClass c) {
    return c == ExitClass::E0 || c == ExitClass::E25;
}

const std::vector<std::string>& view_feature_names() {
    static const std::vector<std::string> names = {
        "time_of_day",     "ip",           "first_hit_referrer", "first_hit_page",
        "story_title",     "search_engine", "city",              "isp",
        "referrer_type",   "pages_viewed",  "search_page_num",
        "frequency_of_visits",
    };
    return names;
}

namespace {

std::optional<std::string> category_of(const ClickEvent& click) {
    if (click.content_category.has_value()) return click.content_category;
    // The story title carries the section as a "Category: title" prefix.
    auto pos = click.story_title.find(':');
    if (pos == std::string::npos || pos == 0) return std::nullopt;
    std::string prefix = click.story_title.substr(0, pos);
    while (!prefix.empty() && prefix.back() == ' ') prefix.pop_back();
    if (prefix.empty()) return std::nullopt;
    return prefix;
}

}  // namespace

ExtractResult extract_video_views(const std::vector<Session>& sessions) {
    ExtractResult result;
    for (const auto& session : sessions) {
        // First click index per player within this session, plus max marker.
        std::map<std::string, std::size_t> first_click;
        std::map<std::string, int> max_marker;
        std::map<std::string, int> last_marker;
        std::map<std::string, bool> regressed;
        for (std::size_t i = 0; i < session.clicks.size(); ++i) {
            const auto& click = session.clicks[i];
            if (!click.player_id || !click.progress_marker) continue;
            const std::string& player = *click.player_id;
            auto [it, inserted] = first_click.emplace(player, i);
            (void)it;
            int marker = *click.progress_marker;
            if (inserted) {
                max_marker[player] = marker;
                last_marker[player] = marker;
                regressed[player] = false;
            } else {
                if (marker < last_marker[player]) regressed[player] = true;
                last_marker[player] = marker;
                max_marker[player] = std::max(max_marker[player], marker);
            }
        }
        for (const auto& [player, first_idx] : first_click) {
            const ClickEvent& first = session.clicks[first_idx];
            VideoViewInstance view;
            view.user_key = session.user_key;
            view.player_id = player;
            view.content_category = category_of(first);
            view.view_start = first.timestamp;
            view.time_of_day = static_cast<int>(((first.timestamp % 86400) + 86400) % 86400 / 3600);
            view.ip = first.ip;
            view.first_hit_referrer = first.first_hit_referrer;
            view.first_hit_page = first.first_hit_page;
            view.story_title = first.story_title;
            view.search_engine = first.search_engine;
            view.city = first.city;
            view.isp = first.isp_domain;
            view.referrer_type = first.referrer_type;
            view.pages_viewed = static_cast<int>(first_idx + 1);
            view.search_page_num = first.search_page_num;
            view.frequency_of_visits = first.frequency_of_visits;
            view.exit_class5 = exit_class_for_marker(max_marker[player]);
            view.early_exit = to_binary(view.exit_class5);
            if (regressed[player]) ++result.marker_regressions;
            result.views.push_back(std::move(view));
        }
    }
    std::sort(result.views.begin(), result.views.end(),
              [](const VideoViewInstance& a, const VideoViewInstance& b) {
                  if (a.user_key != b.user_key) return a.user_key < b.user_key;
                  if (a.view_start != b.view_start) return a.view_start < b.view_start;
                  return a.player_id < b.player_id;
              });
    return result;
}

std::vector<DropoffCurve> dropoff_curve(const std::vector<VideoViewInstance>& views,
                                        bool group_by_category) {
    std::map<std::string, std::array<std::size_t, 5>> reach;
    std::map<std::string, std::size_t> totals;
    for (const auto& view : views) {
        std::string key = "all";
        if (group_by_category) {
            key = view.content_category.value_or("uncategorized");
        }
        auto& counts = reach[key];
        ++totals[key];
        int exit_marker = marker_of(view.exit_class5);
        for (std::size_t k = 0; k < kProgressMarkers.size(); ++k) {
            if (exit_marker >= kProgressMarkers[k]) ++counts[k];
        }
    }
    std::vector<DropoffCurve> curves;
    for (const auto& [category, counts] : reach) {
        DropoffCurve curve;
        curve.category = category;
        curve.view_count = totals[category];
        for (std::size_t k = 0; k < counts.size(); ++k) {
            curve.fractions[k] =
                static_cast<double>(counts[k]) / static_cast<double>(curve.view_count);
        }
        curve.fractions[0] = 1.0;  // every view reached its start marker
        curves.push_back(std::move(curve));
    }
    return curves;
}

FeatureTable build_feature_table(const std::vector<VideoViewInstance>& views) {
    if (views.empty()) throw EmptyInputError("no video views to tabulate");
    const std::size_t n = views.size();

    auto nominal_of = [&](const std::string& name, auto getter) {
        std::vector<std::optional<std::string>> values;
        values.reserve(n);
        for (const auto& v : views) values.push_back(getter(v));
        return Column::nominal(name, values);
    };
    auto numeric_of = [&](const std::string& name, auto getter) {
        std::vector<std::optional<double>> values;
        values.reserve(n);
        for (const auto& v : views) values.push_back(getter(v));
        return Column::numeric(name, values);
    };

    FeatureTable table;
    table.add_column(nominal_of("time_of_day", [](const VideoViewInstance& v) {
        return std::optional<std::string>(std::to_string(v.time_of_day));
    }));
    table.add_column(nominal_of("ip", [](const VideoViewInstance& v) {
        return std::optional<std::string>(v.ip);
    }));
    table.add_column(nominal_of("first_hit_referrer", [](const VideoViewInstance& v) {
        return std::optional<std::string>(v.first_hit_referrer);
    }));
    table.add_column(nominal_of("first_hit_page", [](const VideoViewInstance& v) {
        return std::optional<std::string>(v.first_hit_page);
    }));
    table.add_column(nominal_of("story_title", [](const VideoViewInstance& v) {
        return std::optional<std::string>(v.story_title);
    }));
    table.add_column(nominal_of("search_engine", [](const VideoViewInstance& v) {
        return v.search_engine;
    }));
    table.add_column(nominal_of("city", [](const VideoViewInstance& v) { return v.city; }));
    table.add_column(nominal_of("isp", [](const VideoViewInstance& v) { return v.isp; }));
    table.add_column(nominal_of("referrer_type", [](const VideoViewInstance& v) {
        return std::optional<std::string>(v.referrer_type);
    }));
    table.add_column(numeric_of("pages_viewed", [](const VideoViewInstance& v) {
        return std::optional<double>(static_cast<double>(v.pages_viewed));
    }));
    table.add_column(numeric_of("search_page_num", [](const VideoViewInstance& v) {
        return v.search_page_num
                   ? std::optional<double>(static_cast<double>(*v.search_page_num))
                   : std::nullopt;
    }));
    table.add_column(nominal_of("frequency_of_visits", [](const VideoViewInstance& v) {
        return std::optional<std::string>(std::string(to_string(v.frequency_of_visits)));
    }));

    std::vector<std::optional<std::string>> labels;
    labels.reserve(n);
    for (const auto& v : views) {
        labels.push_back(std::string(to_string(v.exit_class5)));
    }
    table.set_class(Column::nominal("exit_class", labels));
    return table;
}

std::string views_to_tsv(const std::vector<VideoViewInstance>& views) {
    std::vector<std::string> header = view_feature_names();
    header.insert(header.begin(), {"user_key", "player_id", "content_category"});
    header.push_back("exit_class");
    std::string out = join_tsv(header) + "\n";
    for (const auto& v : views) {
        std::vector<std::string> fields;
        fields.push_back(v.user_key);
        fields.push_back(v.player_id);
        fields.push_back(v.content_category.value_or(std::string(kMissingToken)));
        fields.push_back(std::to_string(v.time_of_day));
        fields.push_back(v.ip);
        fields.push_back(v.first_hit_referrer);
        fields.push_back(v.first_hit_page);
        fields.push_back(v.story_title);
        fields.push_back(v.search_engine.value_or(std::string(kMissingToken)));
        fields.push_back(v.city.value_or(std::string(kMissingToken)));
        fields.push_back(v.isp.value_or(std::string(kMissingToken)));
        fields.push_back(v.referrer_type);
        fields.push_back(std::to_string(v.pages_viewed));
        fields.push_back(v.search_page_num ? std::to_string(*v.search_page_num)
                                           : std::string(kMissingToken));
        fields.push_back(std::string(to_string(v.frequency_of_visits)));
        fields.push_back(std::string(to_string(v.exit_class5)));
        out += join_tsv(fields) + "\n";
    }
    return out;
}

std::vector<VideoViewInstance> views_from_tsv(const std::vector<std::string>& lines) {
    if (lines.empty()) throw EmptyInputError("views file is empty");
    std::vector<std::string> expected = view_feature_names();
    expected.insert(expected.begin(), {"user_key", "player_id", "content_category"});
    expected.push_back("exit_class");

    auto header = split_tsv(lines[0]);
    if (header.size() != expected.size())
        throw SchemaMismatchError("views header has " + std::to_string(header.size()) +
                                  " columns, expected " + std::to_string(expected.size()));
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (header[i] != expected[i])
            throw SchemaMismatchError("views column " + std::to_string(i) + " is '" +
                                      std::string(header[i]) + "', expected '" +
                                      expected[i] + "'");
    }

    std::vector<VideoViewInstance> views;
    views.reserve(lines.size() - 1);
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        auto fields = split_tsv(lines[li]);
        if (fields.size() != expected.size())
            throw SchemaMismatchError("views row " + std::to_string(li + 1) +
                                      " has wrong field count");
        auto opt = [&](std::size_t i) -> std::optional<std::string> {
            if (is_missing(fields[i])) return std::nullopt;
            return std::string(fields[i]);
        };
        VideoViewInstance v;
        v.user_key = std::string(fields[0]);
        v.player_id = std::string(fields[1]);
        v.content_category = opt(2);
        auto hour = parse_int64(fields[3]);
        if (!hour || *hour < 0 || *hour > 23)
            throw SchemaMismatchError("bad time_of_day in views row " + std::to_string(li + 1));
        v.time_of_day = static_cast<int>(*hour);
        v.ip = std::string(fields[4]);
        v.first_hit_referrer = std::string(fields[5]);
        v.first_hit_page = std::string(fields[6]);
        v.story_title = std::string(fields[7]);
        v.search_engine = opt(8);
        v.city = opt(9);
        v.isp = opt(10);
        v.referrer_type = std::string(fields[11]);
        auto pages = parse_int64(fields[12]);
        if (!pages || *pages < 1)
            throw SchemaMismatchError("bad pages_viewed in views row " + std::to_string(li + 1));
        v.pages_viewed = static_cast<int>(*pages);
        if (!is_missing(fields[13])) {
            auto spn = parse_int64(fields[13]);
            if (!spn || *spn < 1)
                throw SchemaMismatchError("bad search_page_num in views row " +
                                          std::to_string(li + 1));
            v.search_page_num = static_cast<int>(*spn);
        }
        auto freq = visit_frequency_from(fields[14]);
        if (!freq)
            throw SchemaMismatchError("bad frequency_of_visits in views row " +
                                      std::to_string(li + 1));
        v.frequency_of_visits = *freq;
        auto exit_class = exit_class_from(fields[15]);
        if (!exit_class)
            throw SchemaMismatchError("bad exit_class in views row " + std::to_string(li + 1));
        v.exit_class5 = *exit_class;
        v.early_exit = to_binary(v.exit_class5);
        views.push_back(std::move(v));
    }
    return views;
}

std::string dropoff_to_csv(const std::vector<DropoffCurve>& curves) {
    std::string out = "category,marker,fraction,count\n";
    char buf[64];
    for (const auto& curve : curves) {
        for (std::size_t k = 0; k < curve.fractions.size(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.6f", curve.fractions[k]);
            out += curve.category + "," + std::to_string(kProgressMarkers[k]) + "," +
                   buf + "," + std::to_string(curve.view_count) + "\n";
        }
    }
    return out;
}

}  // namespace clicklab
