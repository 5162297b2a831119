#include "iz/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "iz/model.hpp"

namespace iz {

const char* const kToolVersion = "0.1.0";

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open " + path.string());
    std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return fnv1a64(data);
}

std::string hex64(std::uint64_t value) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

RunManifest make_manifest(const std::string& command, const std::string& config_text,
                          std::uint64_t seed, const std::filesystem::path& catalog_path) {
    RunManifest m;
    m.command = command;
    m.config_digest = hex64(fnv1a64(config_text));
    m.seed = seed;
    m.catalog_digest = catalog_path.empty() ? "" : hex64(fnv1a64_file(catalog_path));
    m.tool_version = kToolVersion;
    m.created_utc = utc_timestamp_now();
    return m;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
    nlohmann::json j;
    j["command"] = manifest.command;
    j["config_digest"] = manifest.config_digest;
    j["seed"] = manifest.seed;
    j["catalog_digest"] = manifest.catalog_digest;
    j["tool_version"] = manifest.tool_version;
    j["created_utc"] = manifest.created_utc;
    j["outputs"] = manifest.outputs;
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot write " + path.string());
    f << j.dump(2) << '\n';
}

std::string utc_timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace iz
