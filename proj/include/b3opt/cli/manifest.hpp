#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

namespace b3opt::cli {

inline constexpr const char* kVersion = "0.1.0";

std::string now_iso8601();

// Skeleton manifest: command, version, start timestamp.
nlohmann::json make_manifest(const std::string& command);

// Stamps finished_at and writes the manifest next to the run's outputs.
void finish_manifest(nlohmann::json& manifest, const std::string& path);

}  // namespace b3opt::cli
