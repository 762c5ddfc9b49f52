#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clicklab/feature_table.hpp"
#include "clicklab/sessionize.hpp"

namespace clicklab {

// The five exit classes: a view labeled E<m> reached marker m and no further,
// so the true exit percent lies in [m, m+25) (E100 means completed).
enum class ExitClass { E0, E25, E50, E75, E100 };

std::string_view to_string(ExitClass c);
std::optional<ExitClass> exit_class_from(std::string_view s);
ExitClass exit_class_for_marker(int marker);
int marker_of(ExitClass c);

// Early exit: the viewer left before reaching 50% of the video.
bool to_binary(ExitClass c);

inline constexpr std::string_view kEarlyLabel = "early";
inline constexpr std::string_view kLateLabel = "late";

// One reconstructed video view with its 12 predictors and labels.
struct VideoViewInstance {
    std::string user_key;
    std::string player_id;
    std::optional<std::string> content_category;
    std::int64_t view_start = 0;  // timestamp of the first video click

    int time_of_day = 0;  // hour bucket 0-23 of the first video click
    std::string ip;
    std::string first_hit_referrer;
    std::string first_hit_page;
    std::string story_title;
    std::optional<std::string> search_engine;
    std::optional<std::string> city;
    std::optional<std::string> isp;
    std::string referrer_type;
    int pages_viewed = 0;  // session clicks up to and including the first video click
    std::optional<int> search_page_num;
    VisitFrequency frequency_of_visits = VisitFrequency::daily;

    ExitClass exit_class5 = ExitClass::E0;
    bool early_exit = true;
};

// Predictor column names in table order.
const std::vector<std::string>& view_feature_names();

struct ExtractResult {
    std::vector<VideoViewInstance> views;
    // Views whose marker sequence was not non-decreasing in time; labels are
    // still assigned by the maximum marker.
    std::size_t marker_regressions = 0;
};

// One instance per (session, player_id) pair, labeled by the highest marker
// observed. Output sorted by user_key, then view start time, then player id.
ExtractResult extract_video_views(const std::vector<Session>& sessions);

struct DropoffCurve {
    std::string category;
    std::array<double, 5> fractions{};  // share reaching markers 0,25,50,75,100
    std::size_t view_count = 0;
};

// Per-category survival fractions; one "all" curve when group_by_category is
// false. Categories with zero views are omitted. Views without a category
// fall under "uncategorized".
std::vector<DropoffCurve> dropoff_curve(const std::vector<VideoViewInstance>& views,
                                        bool group_by_category);

// One row per view, 12 predictor columns plus the 5-class exit label.
FeatureTable build_feature_table(const std::vector<VideoViewInstance>& views);

// TSV export with header, class column last; CSV of the drop-off curves.
std::string views_to_tsv(const std::vector<VideoViewInstance>& views);
std::string dropoff_to_csv(const std::vector<DropoffCurve>& curves);

// Inverse of views_to_tsv; lines include the header row.
std::vector<VideoViewInstance> views_from_tsv(const std::vector<std::string>& lines);

}  // namespace clicklab
