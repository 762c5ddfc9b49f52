#include "clicklab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "clicklab/click_event.hpp"
#include "clicklab/errors.hpp"
#include "clicklab/ingest.hpp"
#include "clicklab/parallel.hpp"
#include "clicklab/rng.hpp"
#include "clicklab/tsv.hpp"
#include "clicklab/video_views.hpp"

namespace clicklab {

namespace {

// December 4, 2012 00:00 UTC; the synthetic clock starts here.
constexpr std::int64_t kEpochBase = 1354579200;
constexpr std::int64_t kIntraClickCapSeconds = 1500;   // 25 min
constexpr std::int64_t kInterSessionGapSeconds = 2700; // 45 min

struct CityInfo {
    const char* city;
    const char* region;
    const char* country;
};

constexpr CityInfo kCities[] = {
    {"atlanta", "georgia", "us"},     {"austin", "texas", "us"},
    {"boston", "massachusetts", "us"}, {"chicago", "illinois", "us"},
    {"denver", "colorado", "us"},     {"detroit", "michigan", "us"},
    {"miami", "florida", "us"},       {"nashville", "tennessee", "us"},
    {"phoenix", "arizona", "us"},     {"portland", "oregon", "us"},
    {"seattle", "washington", "us"},  {"tulsa", "oklahoma", "us"},
};

constexpr const char* kIsps[] = {"comcast.net",  "att.net",    "verizon.net",
                                 "charter.com",  "cox.net",    "centurylink.net",
                                 "windstream.net", "frontier.com"};

constexpr const char* kBrowsers[] = {"chrome", "firefox", "ie9", "safari", "opera"};

constexpr const char* kChannels[] = {"web", "mobile", "amp"};

constexpr const char* kSearchEngines[] = {"google", "bing", "yahoo", "aol"};

constexpr const char* kFrequencies[] = {"hourly", "daily", "weekly", "monthly",
                                        "yearly"};

const char* referrer_domain(const std::string& type) {
    if (type == "social") return "facebook.com/link";
    if (type == "search") return "google.com/search";
    if (type == "internal") return "portal.example.com/home";
    if (type == "bookmark") return "bookmark";
    return "direct";
}

struct UserProfile {
    std::string cookie;
    std::string ip;
    bool cookies_enabled = true;
    bool crawler = false;
    std::size_t city_index = 0;
    std::string isp;
    std::string browser;
    std::string channel;
    std::string frequency;
};

UserProfile make_user(const SynthConfig& config, std::size_t u) {
    Rng rng(derive_seed(config.seed, "user", u));
    UserProfile user;
    user.cookie = "c" + std::to_string(u);
    if (config.ip_pool > 0) {
        // Shared address pool (NAT-style); cookie identities keep users apart.
        std::size_t slot = rng.uniform_index(static_cast<std::size_t>(config.ip_pool));
        user.ip = "10.8." + std::to_string(slot / 250) + "." + std::to_string(1 + slot % 250);
    } else {
        user.ip = std::to_string(10 + rng.uniform_index(180)) + "." +
                  std::to_string(rng.uniform_index(256)) + "." +
                  std::to_string(rng.uniform_index(256)) + "." +
                  std::to_string(1 + (u % 251));
    }
    user.cookies_enabled = rng.uniform() < config.cookie_fraction;
    user.crawler = rng.uniform() < config.crawler_user_fraction;
    user.city_index = rng.uniform_index(std::min<std::size_t>(
        std::size(kCities), static_cast<std::size_t>(config.city_pool)));
    user.isp = kIsps[rng.uniform_index(std::min<std::size_t>(
        std::size(kIsps), static_cast<std::size_t>(config.isp_pool)))];
    user.browser = kBrowsers[rng.uniform_index(std::size(kBrowsers))];
    user.channel = kChannels[rng.uniform_index(std::size(kChannels))];
    user.frequency = kFrequencies[rng.uniform_index(std::size(kFrequencies))];
    return user;
}

// Exit class base distribution from a survival profile.
std::array<double, 5> class_weights(const CategoryProfile& profile) {
    std::array<double, 5> w{};
    for (std::size_t k = 0; k < 4; ++k) {
        w[k] = profile.survival[k] - profile.survival[k + 1];
        if (w[k] < 0.0) w[k] = 0.0;
    }
    w[4] = profile.survival[4];
    return w;
}

struct ViewContext {
    std::string referrer_type;
    std::string city;
    std::string isp;
    std::string browser;
    std::string frequency;
    std::string section;
    std::string search_engine;  // empty when absent
};

const std::string* context_value(const ViewContext& ctx, const std::string& feature) {
    if (feature == "referrer_type") return &ctx.referrer_type;
    if (feature == "city") return &ctx.city;
    if (feature == "isp") return &ctx.isp;
    if (feature == "browser") return &ctx.browser;
    if (feature == "frequency_of_visits") return &ctx.frequency;
    if (feature == "section") return &ctx.section;
    if (feature == "search_engine")
        return ctx.search_engine.empty() ? nullptr : &ctx.search_engine;
    return nullptr;
}

struct RowSink {
    std::string* tsv = nullptr;            // append serialized rows
    GroundTruth* truth = nullptr;          // collect view labels
};

void emit_row(RowSink& sink, const std::vector<std::string>& fields) {
    if (!sink.tsv) return;
    *sink.tsv += join_tsv(fields);
    *sink.tsv += '\n';
}

void generate_for_day(const SynthConfig& config, int day, RowSink sink) {
    const std::int64_t day_start = kEpochBase + static_cast<std::int64_t>(day) * 86400;
    const std::size_t n_extra = static_cast<std::size_t>(
        config.noise_columns + config.constant_columns + config.redundant_columns);

    std::string noise_pool[8] = {"n0", "n1", "n2", "n3", "n4", "n5", "n6", "n7"};

    for (std::size_t u = 0; u < config.n_users; ++u) {
        UserProfile user = make_user(config, u);
        Rng rng(derive_seed(config.seed, "user_day", u * 4096 + static_cast<std::size_t>(day)));

        int n_sessions = rng.poisson(config.sessions_per_user_day);
        std::int64_t clock = day_start + 1800 + static_cast<std::int64_t>(rng.uniform() * 6200.0);
        std::int64_t first_hit_time = 0;
        std::int64_t previous_click = 0;

        for (int s = 0; s < n_sessions; ++s) {
            if (s > 0) {
                clock += kInterSessionGapSeconds +
                         std::min<std::int64_t>(
                             static_cast<std::int64_t>(rng.lognormal(6.0, 0.8)), 3600);
            }
            // Sessions stay well inside the day so consecutive days can never
            // fall within the inactivity timeout of each other.
            if (clock >= day_start + 64000) break;

            // Session-level context.
            std::vector<double> mix_weights;
            for (const auto& [_, w] : config.referrer_mix) mix_weights.push_back(w);
            const std::string& referrer_type =
                config.referrer_mix[rng.categorical(mix_weights)].first;
            std::string section = config.sections[rng.uniform_index(config.sections.size())];
            std::string entry_page = "/" + section + "/front";
            bool is_search = referrer_type == "search";
            std::string search_engine =
                is_search ? kSearchEngines[rng.uniform_index(std::size(kSearchEngines))]
                          : std::string();
            std::string search_keywords =
                is_search ? "kw" + std::to_string(rng.uniform_index(50)) : std::string();
            int search_page_num = is_search ? 1 + rng.geometric(0.6) : 0;
            int visit_number = day * 16 + s + 1;
            if (first_hit_time == 0) first_hit_time = clock;

            int clicks_in_session =
                1 + std::min(rng.geometric(1.0 / config.mean_session_clicks), 11);
            bool has_video = rng.uniform() < config.video_session_fraction;
            int video_position =
                has_video ? static_cast<int>(rng.uniform_index(
                                static_cast<std::size_t>(clicks_in_session)))
                          : -1;

            // Video view setup.
            const CategoryProfile* category = nullptr;
            int exit_marker_index = -1;
            std::string player_id;
            std::string video_title;
            if (has_video) {
                category = &config.categories[rng.uniform_index(config.categories.size())];
                ViewContext ctx{referrer_type, kCities[user.city_index].city,
                                user.isp,      user.browser,
                                user.frequency, section,
                                search_engine};
                const std::string* target_class = nullptr;
                for (const auto& rule : config.planted_rules) {
                    const std::string* value = context_value(ctx, rule.feature);
                    if (!value) continue;
                    auto it = rule.targets.find(*value);
                    if (it != rule.targets.end()) {
                        target_class = &it->second;
                        break;
                    }
                }
                auto weights = class_weights(*category);
                std::size_t sampled = rng.categorical(weights);
                // Planted dependency: blend toward the target class.
                if (target_class && rng.bernoulli(config.signal_strength)) {
                    sampled = static_cast<std::size_t>(static_cast<int>(
                        *exit_class_from(*target_class)));
                }
                exit_marker_index = static_cast<int>(sampled);
                player_id = "pl" + std::to_string(day) + "_" + std::to_string(u) + "_" +
                            std::to_string(s);
                video_title = std::string(category->name) + ": clip " +
                              std::to_string(rng.uniform_index(
                                  static_cast<std::size_t>(config.title_pool)));
                // Crawler rows are dropped by ingest, so their views never
                // reach the labeler; keep the manifest aligned with that.
                if (sink.truth && !user.crawler) {
                    sink.truth->view_labels.emplace_back(
                        player_id,
                        std::string(to_string(static_cast<ExitClass>(exit_marker_index))));
                }
            }

            for (int c = 0; c < clicks_in_session; ++c) {
                if (c > 0) {
                    std::int64_t gap =
                        30 + static_cast<std::int64_t>(rng.lognormal(4.5, 1.0));
                    clock += std::min(gap, kIntraClickCapSeconds);
                }
                if (c > 0 && rng.uniform() < 0.55) {
                    section = config.sections[rng.uniform_index(config.sections.size())];
                }
                std::string title = section + ": story " +
                                    std::to_string(rng.uniform_index(
                                        static_cast<std::size_t>(config.title_pool)));
                std::string page = "/" + section + "/a" +
                                   std::to_string(rng.uniform_index(200));

                // Noise values are drawn on every pass so the ground-truth
                // pass consumes the exact same random stream as generation.
                auto draw_noise = [&]() {
                    std::vector<std::string> values(
                        static_cast<std::size_t>(config.noise_columns));
                    for (auto& v : values) v = noise_pool[rng.uniform_index(8)];
                    return values;
                };

                auto emit_click = [&](const std::string& marker_player,
                                      int marker_value, const std::string& story,
                                      const std::string& category_name,
                                      const std::vector<std::string>& noise_values) {
                    if (!sink.tsv) return;
                    std::vector<std::string> fields;
                    fields.reserve(canonical_fields().size() + n_extra);
                    fields.push_back(user.cookies_enabled
                                         ? user.cookie
                                         : std::string(kMissingToken));
                    fields.push_back(user.ip);
                    fields.push_back(std::to_string(clock));
                    fields.push_back(user.channel);
                    fields.push_back(section);
                    fields.push_back(section + "/s" +
                                     std::to_string(1 + (u + static_cast<std::size_t>(c)) % 3));
                    fields.push_back(page);
                    fields.push_back(story);
                    fields.push_back(c == 0 ? referrer_domain(referrer_type)
                                            : "portal.example.com" + page);
                    fields.push_back(referrer_type);
                    fields.push_back(entry_page);
                    fields.push_back(referrer_domain(referrer_type));
                    fields.push_back(std::to_string(first_hit_time));
                    fields.push_back(visit_number > 1
                                         ? std::to_string(clock - 86400)
                                         : std::string(kMissingToken));
                    fields.push_back(previous_click > 0
                                         ? std::to_string(previous_click)
                                         : std::string(kMissingToken));
                    fields.push_back(user.browser);
                    fields.push_back(kCities[user.city_index].city);
                    fields.push_back(kCities[user.city_index].region);
                    fields.push_back(kCities[user.city_index].country);
                    fields.push_back(user.isp);
                    fields.push_back(is_search ? search_keywords
                                               : std::string(kMissingToken));
                    fields.push_back(is_search ? search_engine
                                               : std::string(kMissingToken));
                    fields.push_back(is_search ? std::to_string(search_page_num)
                                               : std::string(kMissingToken));
                    fields.push_back(user.cookies_enabled ? "1" : "0");
                    fields.push_back(user.crawler ? "1" : "0");
                    fields.push_back(visit_number == 1 ? "1" : "0");
                    fields.push_back(std::to_string(visit_number));
                    fields.push_back(user.frequency);
                    fields.push_back(marker_player.empty() ? std::string(kMissingToken)
                                                           : marker_player);
                    fields.push_back(marker_player.empty()
                                         ? std::string(kMissingToken)
                                         : std::to_string(marker_value));
                    fields.push_back(category_name.empty() ? std::string(kMissingToken)
                                                           : category_name);

                    // Extra columns: noise, then constants, then duplicates.
                    for (const auto& v : noise_values) fields.push_back(v);
                    for (int i = 0; i < config.constant_columns; ++i)
                        fields.push_back("const");
                    for (int i = 0; i < config.redundant_columns; ++i) {
                        if (!noise_values.empty()) {
                            fields.push_back(
                                noise_values[static_cast<std::size_t>(i) %
                                             noise_values.size()]);
                        } else {
                            fields.push_back(section);
                        }
                    }
                    emit_row(sink, fields);
                };

                if (c == video_position) {
                    // Marker entries: cumulative history up to the exit marker.
                    for (int m = 0; m <= exit_marker_index; ++m) {
                        if (m > 0) {
                            clock += 30 + static_cast<std::int64_t>(rng.uniform() * 240.0);
                        }
                        emit_click(player_id, kProgressMarkers[static_cast<std::size_t>(m)],
                                   video_title, category->name, draw_noise());
                        previous_click = clock;
                    }
                } else {
                    emit_click("", 0, title, "", draw_noise());
                    previous_click = clock;
                }
            }
        }
    }
}

}  // namespace

void SynthConfig::validate() const {
    if (n_users < 1) throw InvalidConfigError("n_users must be >= 1");
    if (n_days < 1) throw InvalidConfigError("n_days must be >= 1");
    if (sections.empty()) throw InvalidConfigError("sections must be nonempty");
    if (categories.empty()) throw InvalidConfigError("categories must be nonempty");
    for (const auto& cat : categories) {
        if (std::abs(cat.survival[0] - 1.0) > 1e-9)
            throw InvalidConfigError("categories." + cat.name +
                                     ".survival must start at 1.0");
        for (std::size_t k = 0; k < cat.survival.size(); ++k) {
            if (cat.survival[k] < 0.0 || cat.survival[k] > 1.0)
                throw InvalidConfigError("categories." + cat.name +
                                         ".survival values must be in [0,1]");
            if (k > 0 && cat.survival[k] > cat.survival[k - 1] + 1e-12)
                throw InvalidConfigError("categories." + cat.name +
                                         ".survival must be non-increasing");
        }
    }
    double mix_total = 0.0;
    for (const auto& [name, w] : referrer_mix) {
        if (w < 0.0) throw InvalidConfigError("referrer_mix." + name + " negative");
        mix_total += w;
    }
    if (std::abs(mix_total - 1.0) > 1e-6)
        throw InvalidConfigError("referrer_mix must sum to 1");
    if (signal_strength < 0.0 || signal_strength > 1.0)
        throw InvalidConfigError("signal_strength must be in [0,1]");
    for (const auto& rule : planted_rules) {
        for (const auto& [value, cls] : rule.targets) {
            if (!exit_class_from(cls))
                throw InvalidConfigError("planted_rules." + rule.feature + "." + value +
                                         ": unknown exit class " + cls);
        }
    }
    if (noise_columns < 0 || constant_columns < 0 || redundant_columns < 0)
        throw InvalidConfigError("extra column counts must be >= 0");
    if (sessions_per_user_day <= 0.0)
        throw InvalidConfigError("sessions_per_user_day must be positive");
    if (video_session_fraction < 0.0 || video_session_fraction > 1.0)
        throw InvalidConfigError("video_session_fraction must be in [0,1]");
    if (mean_session_clicks < 1.0)
        throw InvalidConfigError("mean_session_clicks must be >= 1");
    if (crawler_user_fraction < 0.0 || crawler_user_fraction > 1.0)
        throw InvalidConfigError("crawler_user_fraction must be in [0,1]");
    if (title_pool < 1) throw InvalidConfigError("title_pool must be >= 1");
    if (ip_pool < 0) throw InvalidConfigError("ip_pool must be >= 0");
    if (cookie_fraction < 0.0 || cookie_fraction > 1.0)
        throw InvalidConfigError("cookie_fraction must be in [0,1]");
    if (city_pool < 1) throw InvalidConfigError("city_pool must be >= 1");
    if (isp_pool < 1) throw InvalidConfigError("isp_pool must be >= 1");
}

SynthConfig SynthConfig::from_json(const nlohmann::json& j) {
    SynthConfig config;
    if (j.contains("n_users")) config.n_users = j.at("n_users").get<std::size_t>();
    if (j.contains("n_days")) config.n_days = j.at("n_days").get<int>();
    if (j.contains("sections"))
        config.sections = j.at("sections").get<std::vector<std::string>>();
    if (j.contains("categories")) {
        config.categories.clear();
        for (const auto& item : j.at("categories")) {
            CategoryProfile profile;
            profile.name = item.at("name").get<std::string>();
            auto survival = item.at("survival").get<std::vector<double>>();
            if (survival.size() != 5)
                throw InvalidConfigError("categories." + profile.name +
                                         ".survival needs 5 values");
            std::copy(survival.begin(), survival.end(), profile.survival.begin());
            config.categories.push_back(std::move(profile));
        }
    }
    if (j.contains("referrer_mix")) {
        config.referrer_mix.clear();
        for (const auto& [key, value] : j.at("referrer_mix").items()) {
            config.referrer_mix.emplace_back(key, value.get<double>());
        }
        std::sort(config.referrer_mix.begin(), config.referrer_mix.end());
    }
    if (j.contains("signal_strength"))
        config.signal_strength = j.at("signal_strength").get<double>();
    if (j.contains("planted_rules")) {
        config.planted_rules.clear();
        for (const auto& item : j.at("planted_rules")) {
            PlantedRule rule;
            rule.feature = item.at("feature").get<std::string>();
            for (const auto& [value, cls] : item.at("targets").items()) {
                rule.targets[value] = cls.get<std::string>();
            }
            config.planted_rules.push_back(std::move(rule));
        }
    }
    if (j.contains("noise_columns")) config.noise_columns = j.at("noise_columns").get<int>();
    if (j.contains("constant_columns"))
        config.constant_columns = j.at("constant_columns").get<int>();
    if (j.contains("redundant_columns"))
        config.redundant_columns = j.at("redundant_columns").get<int>();
    if (j.contains("sessions_per_user_day"))
        config.sessions_per_user_day = j.at("sessions_per_user_day").get<double>();
    if (j.contains("video_session_fraction"))
        config.video_session_fraction = j.at("video_session_fraction").get<double>();
    if (j.contains("mean_session_clicks"))
        config.mean_session_clicks = j.at("mean_session_clicks").get<double>();
    if (j.contains("crawler_user_fraction"))
        config.crawler_user_fraction = j.at("crawler_user_fraction").get<double>();
    if (j.contains("title_pool")) config.title_pool = j.at("title_pool").get<int>();
    if (j.contains("ip_pool")) config.ip_pool = j.at("ip_pool").get<int>();
    if (j.contains("cookie_fraction"))
        config.cookie_fraction = j.at("cookie_fraction").get<double>();
    if (j.contains("city_pool")) config.city_pool = j.at("city_pool").get<int>();
    if (j.contains("isp_pool")) config.isp_pool = j.at("isp_pool").get<int>();
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    config.validate();
    return config;
}

nlohmann::json SynthConfig::to_json() const {
    nlohmann::json j;
    j["n_users"] = n_users;
    j["n_days"] = n_days;
    j["sections"] = sections;
    nlohmann::json cats = nlohmann::json::array();
    for (const auto& cat : categories) {
        cats.push_back({{"name", cat.name},
                        {"survival", std::vector<double>(cat.survival.begin(),
                                                         cat.survival.end())}});
    }
    j["categories"] = std::move(cats);
    nlohmann::json mix = nlohmann::json::object();
    for (const auto& [name, w] : referrer_mix) mix[name] = w;
    j["referrer_mix"] = std::move(mix);
    j["signal_strength"] = signal_strength;
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& rule : planted_rules) {
        nlohmann::json targets = nlohmann::json::object();
        for (const auto& [value, cls] : rule.targets) targets[value] = cls;
        rules.push_back({{"feature", rule.feature}, {"targets", std::move(targets)}});
    }
    j["planted_rules"] = std::move(rules);
    j["noise_columns"] = noise_columns;
    j["constant_columns"] = constant_columns;
    j["redundant_columns"] = redundant_columns;
    j["sessions_per_user_day"] = sessions_per_user_day;
    j["video_session_fraction"] = video_session_fraction;
    j["mean_session_clicks"] = mean_session_clicks;
    j["crawler_user_fraction"] = crawler_user_fraction;
    j["title_pool"] = title_pool;
    j["ip_pool"] = ip_pool;
    j["cookie_fraction"] = cookie_fraction;
    j["city_pool"] = city_pool;
    j["isp_pool"] = isp_pool;
    j["seed"] = seed;
    return j;
}

std::string GroundTruth::to_json() const {
    nlohmann::ordered_json j;
    j["planted_columns"] = planted_columns;
    nlohmann::ordered_json labels = nlohmann::ordered_json::array();
    for (const auto& [player, cls] : view_labels) {
        labels.push_back({{"player_id", player}, {"exit_class", cls}});
    }
    j["view_labels"] = std::move(labels);
    return j.dump(2) + "\n";
}

std::string synth_header(const SynthConfig& config) {
    std::vector<std::string> names(canonical_fields().begin(), canonical_fields().end());
    for (int i = 0; i < config.noise_columns; ++i)
        names.push_back("extra_noise_" + std::to_string(i));
    for (int i = 0; i < config.constant_columns; ++i)
        names.push_back("extra_const_" + std::to_string(i));
    for (int i = 0; i < config.redundant_columns; ++i)
        names.push_back("extra_dup_" + std::to_string(i));
    return join_tsv(names);
}

std::string generate_day(const SynthConfig& config, int day) {
    config.validate();
    std::string body;
    RowSink sink;
    sink.tsv = &body;
    generate_for_day(config, day, sink);
    return body;
}

std::vector<std::string> generate(const SynthConfig& config, const std::string& out_dir,
                                  unsigned jobs) {
    config.validate();
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> paths(static_cast<std::size_t>(config.n_days));
    std::string header = synth_header(config);
    parallel_for(static_cast<std::size_t>(config.n_days), jobs, [&](std::size_t day) {
        char name[32];
        std::snprintf(name, sizeof(name), "day_%03zu.tsv", day);
        std::string path = out_dir + "/" + name;
        std::string contents = header + "\n" + generate_day(config, static_cast<int>(day));
        write_file(path, contents);
        paths[day] = path;
    });
    GroundTruth truth = ground_truth(config);
    write_file(out_dir + "/manifest.json", truth.to_json());
    return paths;
}

GroundTruth ground_truth(const SynthConfig& config) {
    config.validate();
    GroundTruth truth;
    for (const auto& rule : config.planted_rules) {
        if (std::find(truth.planted_columns.begin(), truth.planted_columns.end(),
                      rule.feature) == truth.planted_columns.end()) {
            truth.planted_columns.push_back(rule.feature);
        }
    }
    for (int day = 0; day < config.n_days; ++day) {
        RowSink sink;
        sink.truth = &truth;
        generate_for_day(config, day, sink);
    }
    return truth;
}

}  // namespace clicklab
