#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "clicklab/click_event.hpp"

namespace clicklab {

inline constexpr std::int64_t kDefaultSessionTimeoutSeconds = 30 * 60;

// A maximal run of one user's clicks with every inter-click gap at most the
// inactivity timeout.
struct Session {
    std::string user_key;
    std::vector<ClickEvent> clicks;  // sorted by timestamp, ties in input order
    std::int64_t start_time = 0;
    std::int64_t end_time = 0;
    std::string entry_referrer_type;
    std::size_t pages_viewed = 0;
};

// Partitions events by user and time. A new session starts whenever the gap
// to the user's previous click strictly exceeds timeout_seconds; a gap of
// exactly the timeout stays in-session.
std::vector<Session> sessionize(const std::vector<ClickEvent>& events,
                                std::int64_t timeout_seconds = kDefaultSessionTimeoutSeconds);

// Section of each click in order, consecutive duplicates collapsed.
std::vector<std::pair<std::string, std::size_t>> session_path(const Session& session);

struct SectionGraph {
    // section -> click count, restricted to the top_k sections by volume
    std::map<std::string, std::int64_t> nodes;
    // (from, to) -> count of consecutive same-session click pairs with
    // distinct kept sections
    std::map<std::pair<std::string, std::string>, std::int64_t> edges;
};

SectionGraph section_graph(const std::vector<Session>& sessions, std::size_t top_k);

// JSON-lines export: one session per line.
std::string sessions_to_jsonl(const std::vector<Session>& sessions);

// CSV exports for external graph plotting.
std::string graph_edges_csv(const SectionGraph& graph);
std::string graph_nodes_csv(const SectionGraph& graph);

}  // namespace clicklab
