#include "run_manifest.hpp"

#include <chrono>
#include <ctime>

#include "config_io.hpp"

namespace rlab::cli {

std::string utc_timestamp_now() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const RunManifest& m, const std::string& path) {
    nlohmann::json doc{
        {"command", m.command},
        {"resolved_config", m.resolved_config},
        {"seed", m.seed ? nlohmann::json(*m.seed) : nlohmann::json(nullptr)},
        {"tool_version", m.tool_version},
        {"started_at_utc", m.started_at_utc},
        {"finished_at_utc", m.finished_at_utc},
        {"output_paths", m.output_paths},
    };
    write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace rlab::cli
