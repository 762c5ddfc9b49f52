#include "clicklab/sessionize.hpp"

#include <algorithm>
#include <unordered_map>

#include <json.hpp>

#include "clicklab/errors.hpp"

namespace clicklab {

std::vector<Session> sessionize(const std::vector<ClickEvent>& events,
                                std::int64_t timeout_seconds) {
    if (timeout_seconds <= 0)
        throw InvalidConfigError("session timeout must be positive");

    // Group by user, preserving input order so equal timestamps stay stable.
    std::unordered_map<std::string, std::vector<std::size_t>> by_user;
    for (std::size_t i = 0; i < events.size(); ++i) {
        by_user[events[i].user_key].push_back(i);
    }

    std::vector<Session> sessions;
    for (auto& [user, indices] : by_user) {
        std::stable_sort(indices.begin(), indices.end(),
                         [&](std::size_t a, std::size_t b) {
                             return events[a].timestamp < events[b].timestamp;
                         });
        Session current;
        auto flush = [&]() {
            if (current.clicks.empty()) return;
            current.user_key = user;
            current.start_time = current.clicks.front().timestamp;
            current.end_time = current.clicks.back().timestamp;
            current.entry_referrer_type = current.clicks.front().referrer_type;
            current.pages_viewed = current.clicks.size();
            sessions.push_back(std::move(current));
            current = Session{};
        };
        for (std::size_t idx : indices) {
            if (!current.clicks.empty() &&
                events[idx].timestamp - current.clicks.back().timestamp > timeout_seconds) {
                flush();
            }
            current.clicks.push_back(events[idx]);
        }
        flush();
    }

    std::sort(sessions.begin(), sessions.end(), [](const Session& a, const Session& b) {
        if (a.user_key != b.user_key) return a.user_key < b.user_key;
        return a.start_time < b.start_time;
    });
    return sessions;
}

std::vector<std::pair<std::string, std::size_t>> session_path(const Session& session) {
    std::vector<std::pair<std::string, std::size_t>> path;
    for (const auto& click : session.clicks) {
        if (!path.empty() && path.back().first == click.section) {
            ++path.back().second;
        } else {
            path.emplace_back(click.section, 1);
        }
    }
    return path;
}

SectionGraph section_graph(const std::vector<Session>& sessions, std::size_t top_k) {
    if (top_k < 1) throw InvalidConfigError("top_k must be >= 1");

    std::map<std::string, std::int64_t> volume;
    for (const auto& s : sessions) {
        for (const auto& click : s.clicks) ++volume[click.section];
    }

    // Top-k sections by click volume, ties broken lexicographically. std::map
    // iteration is already name-ordered, so a stable sort by volume suffices.
    std::vector<std::pair<std::string, std::int64_t>> ranked(volume.begin(), volume.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (ranked.size() > top_k) ranked.resize(top_k);

    SectionGraph graph;
    for (const auto& [name, count] : ranked) graph.nodes.emplace(name, count);

    for (const auto& s : sessions) {
        for (std::size_t i = 1; i < s.clicks.size(); ++i) {
            const std::string& from = s.clicks[i - 1].section;
            const std::string& to = s.clicks[i].section;
            if (from == to) continue;  // repeat clicks collapse, no self edges
            if (!graph.nodes.count(from) || !graph.nodes.count(to)) continue;
            ++graph.edges[{from, to}];
        }
    }
    return graph;
}

std::string sessions_to_jsonl(const std::vector<Session>& sessions) {
    std::string out;
    for (const auto& s : sessions) {
        nlohmann::ordered_json j;
        j["user_key"] = s.user_key;
        j["start_time"] = s.start_time;
        j["end_time"] = s.end_time;
        j["clicks"] = s.pages_viewed;
        nlohmann::ordered_json path = nlohmann::ordered_json::array();
        for (const auto& [section, count] : session_path(s)) {
            path.push_back({section, count});
        }
        j["path"] = std::move(path);
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string graph_edges_csv(const SectionGraph& graph) {
    std::string out = "from,to,count\n";
    for (const auto& [edge, count] : graph.edges) {
        out += edge.first + "," + edge.second + "," + std::to_string(count) + "\n";
    }
    return out;
}

std::string graph_nodes_csv(const SectionGraph& graph) {
    std::string out = "section,visits\n";
    for (const auto& [name, count] : graph.nodes) {
        out += name + "," + std::to_string(count) + "\n";
    }
    return out;
}

}  // namespace clicklab
