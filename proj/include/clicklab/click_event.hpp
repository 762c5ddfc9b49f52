#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clicklab {

enum class VisitFrequency { hourly, daily, weekly, monthly, yearly };

std::string_view to_string(VisitFrequency f);
std::optional<VisitFrequency> visit_frequency_from(std::string_view s);

// One parsed and validated click-log row.
//
// user_key holds the cookie identifier when cookies were enabled for the hit
// and the raw IP string otherwise, so a cookieless visitor is only linkable
// within whatever events share that IP.
struct ClickEvent {
    std::string user_key;
    std::string ip;
    std::int64_t timestamp = 0;

    std::string channel;
    std::string section;
    std::string subsection;
    std::string page_url;
    std::string story_title;
    std::string referrer_url;
    std::string referrer_type;
    std::string first_hit_page;
    std::string first_hit_referrer;

    std::optional<std::int64_t> first_hit_time;
    std::optional<std::int64_t> last_visit;
    std::optional<std::int64_t> last_click;

    std::optional<std::string> browser;
    std::optional<std::string> city;
    std::optional<std::string> region;
    std::optional<std::string> country;
    std::optional<std::string> isp_domain;
    std::optional<std::string> search_keywords;
    std::optional<std::string> search_engine;
    std::optional<int> search_page_num;

    bool cookies_enabled = false;
    bool exclude_hit = false;
    bool new_visit = false;
    int visit_number = 1;
    VisitFrequency frequency_of_visits = VisitFrequency::daily;

    std::optional<std::string> player_id;
    std::optional<int> progress_marker;
    std::optional<std::string> content_category;

    bool operator==(const ClickEvent&) const = default;
};

// The five cumulative progress checkpoints a video player can log.
inline constexpr std::array<int, 5> kProgressMarkers{0, 25, 50, 75, 100};

bool is_valid_marker(int marker);

// Canonical dump columns, in serialization order.
const std::vector<std::string>& canonical_fields();

}  // namespace clicklab
