#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace iz {

std::uint64_t fnv1a64(const std::string& data);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string hex64(std::uint64_t value);

// provenance record written next to every output batch; timestamps live only
// here so the result files stay byte-identical across reruns
struct RunManifest {
    std::string command;
    std::string config_digest;
    std::uint64_t seed = 0;
    std::string catalog_digest;
    std::string tool_version;
    std::string created_utc;
    std::vector<std::string> outputs;
};

extern const char* const kToolVersion;

RunManifest make_manifest(const std::string& command, const std::string& config_text,
                          std::uint64_t seed, const std::filesystem::path& catalog_path);

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

std::string utc_timestamp_now();

}  // namespace iz
