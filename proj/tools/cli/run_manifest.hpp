#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace rlab::cli {

/// Reproducibility sidecar written next to every output file. Wall-clock
/// timestamps live only here so the main outputs stay bit-identical across
/// reruns.
struct RunManifest {
    std::string command;
    nlohmann::json resolved_config;
    std::optional<std::uint64_t> seed;
    std::string tool_version;
    std::string started_at_utc;
    std::string finished_at_utc;
    std::vector<std::string> output_paths;
};

std::string utc_timestamp_now();

/// Serializes the manifest to `<output>.manifest.json`.
void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace rlab::cli
