#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace clicklab {

// Machine-readable record of one CLI invocation: inputs, the seed, and every
// artifact produced. Wall time is reported on stderr, never in the file, so
// identical runs stay byte-identical.
struct RunManifest {
    std::string command;
    std::vector<std::string> input_paths;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string tool_version;
    std::vector<std::string> output_paths;

    std::string to_json() const;
};

inline constexpr std::string_view kToolVersion = "0.1.0";

// FNV-1a over the given byte strings; stable across runs and platforms.
std::string stable_hash(const std::vector<std::string>& parts);

// Hash of file contents plus flag string, for RunManifest.config_hash.
std::string hash_inputs(const std::vector<std::string>& paths, const std::string& flags);

}  // namespace clicklab
