#include "clicklab/click_event.hpp"

#include <algorithm>

namespace clicklab {

std::string_view to_string(VisitFrequency f) {
    switch (f) {
        case VisitFrequency::hourly: return "hourly";
        case VisitFrequency::daily: return "daily";
        case VisitFrequency::weekly: return "weekly";
        case VisitFrequency::monthly: return "monthly";
        case VisitFrequency::yearly: return "yearly";
    }
    return "daily";
}

std::optional<VisitFrequency> visit_frequency_from(std::string_view s) {
    if (s == "hourly") return VisitFrequency::hourly;
    if (s == "daily") return VisitFrequency::daily;
    if (s == "weekly") return VisitFrequency::weekly;
    if (s == "monthly") return VisitFrequency::monthly;
    if (s == "yearly") return VisitFrequency::yearly;
    return std::nullopt;
}

bool is_valid_marker(int marker) {
    return std::find(kProgressMarkers.begin(), kProgressMarkers.end(), marker) !=
           kProgressMarkers.end();
}

const std::vector<std::string>& canonical_fields() {
    static const std::vector<std::string> fields = {
        "user_key",
        "ip",
        "timestamp",
        "channel",
        "section",
        "subsection",
        "page_url",
        "story_title",
        "referrer_url",
        "referrer_type",
        "first_hit_page",
        "first_hit_referrer",
        "first_hit_time",
        "last_visit",
        "last_click",
        "browser",
        "city",
        "region",
        "country",
        "isp_domain",
        "search_keywords",
        "search_engine",
        "search_page_num",
        "cookies_enabled",
        "exclude_hit",
        "new_visit",
        "visit_number",
        "frequency_of_visits",
        "player_id",
        "progress_marker",
        "content_category",
    };
    return fields;
}

}  // namespace clicklab
