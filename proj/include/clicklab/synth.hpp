#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace clicklab {

// Survival profile of one content category: P(view reaches marker k) for the
// markers 0, 25, 50, 75, 100. Starts at 1.0 and never increases.
struct CategoryProfile {
    std::string name;
    std::array<double, 5> survival{1.0, 0.8, 0.6, 0.4, 0.2};
};

// Deterministic feature -> exit-class dependency planted into the stream.
// When a view's feature value has a mapping, the exit class is replaced by
// the target with probability signal_strength.
struct PlantedRule {
    std::string feature;                          // e.g. "referrer_type"
    std::map<std::string, std::string> targets;   // value -> exit class label
};

struct SynthConfig {
    std::size_t n_users = 5000;
    int n_days = 7;
    std::vector<std::string> sections = {"news",    "sports",  "technology",
                                         "entertainment", "finance", "weather"};
    std::vector<CategoryProfile> categories = {
        {"Technology", {1.0, 0.92, 0.82, 0.72, 0.62}},
        {"Entertainment", {1.0, 0.70, 0.45, 0.28, 0.16}},
    };
    std::vector<std::pair<std::string, double>> referrer_mix = {
        {"social", 0.25}, {"search", 0.30}, {"direct", 0.20},
        {"internal", 0.15}, {"bookmark", 0.10}};
    double signal_strength = 0.0;
    std::vector<PlantedRule> planted_rules = {
        {"referrer_type",
         {{"social", "E0"},
          {"search", "E25"},
          {"direct", "E50"},
          {"internal", "E75"},
          {"bookmark", "E100"}}}};
    int noise_columns = 3;
    int constant_columns = 2;
    int redundant_columns = 2;
    double sessions_per_user_day = 0.9;
    double video_session_fraction = 0.35;
    double mean_session_clicks = 4.0;
    double crawler_user_fraction = 0.02;
    int title_pool = 40;  // distinct story/clip titles per section or category
    int ip_pool = 0;      // 0 = unique IP per user; otherwise a shared pool
    double cookie_fraction = 0.9;
    int city_pool = 12;   // capped by the built-in city table
    int isp_pool = 8;     // capped by the built-in ISP table
    std::uint64_t seed = 1;

    void validate() const;
    static SynthConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct GroundTruth {
    // player_id -> exit class label, in generation order.
    std::vector<std::pair<std::string, std::string>> view_labels;
    std::vector<std::string> planted_columns;

    std::string to_json() const;
};

// Header line shared by every generated dump (canonical fields plus the
// configured extra columns).
std::string synth_header(const SynthConfig& config);

// TSV body (no header) for one day; fully determined by (config, day).
std::string generate_day(const SynthConfig& config, int day);

// Writes day_###.tsv files plus manifest.json under out_dir; returns the dump
// paths in day order.
std::vector<std::string> generate(const SynthConfig& config, const std::string& out_dir,
                                  unsigned jobs = 1);

GroundTruth ground_truth(const SynthConfig& config);

}  // namespace clicklab
