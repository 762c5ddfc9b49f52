#include "clicklab/run_manifest.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "clicklab/errors.hpp"

namespace clicklab {

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["tool_version"] = tool_version.empty() ? std::string(kToolVersion) : tool_version;
    j["seed"] = seed;
    j["config_hash"] = config_hash;
    j["input_paths"] = input_paths;
    j["output_paths"] = output_paths;
    return j.dump(2) + "\n";
}

std::string stable_hash(const std::vector<std::string>& parts) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& part : parts) {
        for (unsigned char c : part) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= 0xff;  // separator
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string hash_inputs(const std::vector<std::string>& paths, const std::string& flags) {
    std::vector<std::string> parts;
    parts.reserve(paths.size() + 1);
    for (const auto& path : paths) {
        std::ifstream file(path, std::ios::binary);
        if (!file.is_open()) throw IoError("cannot open " + path);
        std::string contents((std::istreambuf_iterator<char>(file)),
                             std::istreambuf_iterator<char>());
        parts.push_back(std::move(contents));
    }
    parts.push_back(flags);
    return stable_hash(parts);
}

}  // namespace clicklab
