#include "b3opt/cli/manifest.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>

#include "b3opt/core/csv.hpp"

namespace b3opt::cli {

std::string now_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

nlohmann::json make_manifest(const std::string& command) {
    nlohmann::json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["started_at"] = now_iso8601();
    return j;
}

void finish_manifest(nlohmann::json& manifest, const std::string& path) {
    manifest["finished_at"] = now_iso8601();
    write_file(path, manifest.dump(2) + "\n");
}

}  // namespace b3opt::cli
