#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "clicklab/rng.hpp"
#include "clicklab/sessionize.hpp"
#include "support/builders.hpp"

using namespace clicklab;

TEST_CASE("gaps at or under 30 minutes stay in one session") {
    std::vector<ClickEvent> events = {builders::click("u", 1000),
                                      builders::click("u", 1600),
                                      builders::click("u", 2500)};
    auto sessions = sessionize(events, 1800);
    REQUIRE(sessions.size() == 1);
    CHECK(sessions[0].pages_viewed == 3);
    CHECK(sessions[0].start_time == 1000);
    CHECK(sessions[0].end_time == 2500);
}

TEST_CASE("a gap strictly over the timeout splits the session") {
    std::vector<ClickEvent> events = {builders::click("u", 1000),
                                      builders::click("u", 1000 + 2700)};
    auto sessions = sessionize(events, 1800);
    CHECK(sessions.size() == 2);
}

TEST_CASE("a gap of exactly the timeout stays in-session") {
    std::vector<ClickEvent> events = {builders::click("u", 1000),
                                      builders::click("u", 1000 + 1800)};
    auto sessions = sessionize(events, 1800);
    CHECK(sessions.size() == 1);
}

TEST_CASE("empty input yields no sessions") {
    CHECK(sessionize({}, 1800).empty());
}

namespace {

std::vector<ClickEvent> random_events(std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<ClickEvent> events;
    events.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::string user = "u" + std::to_string(rng.uniform_index(17));
        std::int64_t t = 1 + static_cast<std::int64_t>(rng.uniform_index(400000));
        const char* sections[] = {"news", "sports", "weather"};
        events.push_back(builders::click(user, t, sections[rng.uniform_index(3)]));
    }
    return events;
}

// Canonical form of a partition: per session, (user, sorted timestamps).
std::multiset<std::string> partition_signature(const std::vector<Session>& sessions) {
    std::multiset<std::string> signature;
    for (const auto& s : sessions) {
        std::vector<std::int64_t> times;
        for (const auto& c : s.clicks) times.push_back(c.timestamp);
        std::sort(times.begin(), times.end());
        std::string key = s.user_key;
        for (auto t : times) key += "," + std::to_string(t);
        signature.insert(key);
    }
    return signature;
}

}  // namespace

TEST_CASE("sessionize conserves events and respects gap bounds") {
    auto events = random_events(3000, 99);
    const std::int64_t timeout = 1800;
    auto sessions = sessionize(events, timeout);

    std::size_t total = 0;
    std::map<std::string, std::vector<const Session*>> by_user;
    for (const auto& s : sessions) {
        total += s.clicks.size();
        REQUIRE_FALSE(s.clicks.empty());
        CHECK(s.pages_viewed == s.clicks.size());
        for (std::size_t i = 1; i < s.clicks.size(); ++i) {
            CHECK(s.clicks[i].timestamp - s.clicks[i - 1].timestamp <= timeout);
            CHECK(s.clicks[i].timestamp >= s.clicks[i - 1].timestamp);
            CHECK(s.clicks[i].user_key == s.user_key);
        }
        by_user[s.user_key].push_back(&s);
    }
    CHECK(total == events.size());

    for (const auto& [user, user_sessions] : by_user) {
        for (std::size_t i = 1; i < user_sessions.size(); ++i) {
            CHECK(user_sessions[i]->start_time - user_sessions[i - 1]->end_time > timeout);
        }
    }
}

TEST_CASE("sessionize is insensitive to input order") {
    auto events = random_events(1200, 7);
    auto baseline = partition_signature(sessionize(events, 1800));
    Rng rng(123);
    for (int trial = 0; trial < 3; ++trial) {
        rng.shuffle(events);
        CHECK(partition_signature(sessionize(events, 1800)) == baseline);
    }
}

TEST_CASE("session_path collapses consecutive duplicates") {
    Session s;
    s.user_key = "u";
    s.clicks = {builders::click("u", 1, "news"), builders::click("u", 2, "news"),
                builders::click("u", 3, "sports")};
    auto path = session_path(s);
    REQUIRE(path.size() == 2);
    CHECK(path[0] == std::pair<std::string, std::size_t>("news", 2));
    CHECK(path[1] == std::pair<std::string, std::size_t>("sports", 1));
}

TEST_CASE("session_path of a single click") {
    Session s;
    s.user_key = "u";
    s.clicks = {builders::click("u", 1, "news")};
    auto path = session_path(s);
    REQUIRE(path.size() == 1);
    CHECK(path[0].first == "news");
    CHECK(path[0].second == 1);
}

TEST_CASE("a referred session path starts at the landing section") {
    std::vector<ClickEvent> events;
    ClickEvent landing = builders::click("u", 100, "news");
    landing.referrer_type = "social";
    landing.referrer_url = "facebook.com/link";
    events.push_back(landing);
    events.push_back(builders::click("u", 200, "news"));
    events.push_back(builders::click("u", 300, "news"));
    events.push_back(builders::click("u", 400, "sports"));
    auto sessions = sessionize(events, 1800);
    REQUIRE(sessions.size() == 1);
    CHECK(sessions[0].entry_referrer_type == "social");
    auto path = session_path(sessions[0]);
    CHECK(path.front().first == "news");
    CHECK(path.front().second == 3);
}

TEST_CASE("section_graph counts directed transitions") {
    std::vector<ClickEvent> events = {builders::click("u", 1, "a"),
                                      builders::click("u", 2, "b"),
                                      builders::click("u", 3, "a")};
    auto graph = section_graph(sessionize(events, 1800), 10);
    CHECK(graph.nodes.at("a") == 2);
    CHECK(graph.nodes.at("b") == 1);
    CHECK(graph.edges.at({"a", "b"}) == 1);
    CHECK(graph.edges.at({"b", "a"}) == 1);
    CHECK(graph.edges.size() == 2);
}

TEST_CASE("section_graph keeps the top_k sections by volume") {
    std::vector<ClickEvent> events;
    // 20 sections with distinct volumes 1..20.
    std::int64_t t = 1;
    for (int s = 1; s <= 20; ++s) {
        for (int i = 0; i < s; ++i) {
            events.push_back(
                builders::click("u" + std::to_string(s * 100 + i), t, "s" + std::to_string(s)));
            t += 10000;
        }
    }
    auto graph = section_graph(sessionize(events, 1800), 12);
    CHECK(graph.nodes.size() == 12);
    CHECK(graph.nodes.count("s20") == 1);
    CHECK(graph.nodes.count("s8") == 0);  // rank 13
    CHECK(graph.nodes.count("s9") == 1);  // rank 12
}

TEST_CASE("singleton sessions give nodes but no edges") {
    std::vector<ClickEvent> events;
    for (int i = 0; i < 5; ++i) {
        events.push_back(builders::click("u" + std::to_string(i), 100 + i, "news"));
    }
    auto graph = section_graph(sessionize(events, 1800), 3);
    CHECK_FALSE(graph.nodes.empty());
    CHECK(graph.edges.empty());
}

TEST_CASE("edge totals equal collapsed-pair transitions among kept sections") {
    auto events = random_events(2500, 41);
    auto sessions = sessionize(events, 1800);
    auto graph = section_graph(sessions, 2);

    // Independent recount: collapse each session's path, then count
    // transitions whose both endpoints were kept.
    std::int64_t expected = 0;
    for (const auto& s : sessions) {
        auto path = session_path(s);
        for (std::size_t i = 1; i < path.size(); ++i) {
            if (graph.nodes.count(path[i - 1].first) && graph.nodes.count(path[i].first)) {
                ++expected;
            }
        }
    }
    std::int64_t actual = 0;
    for (const auto& [edge, count] : graph.edges) actual += count;
    CHECK(actual == expected);
}
