#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "repeaterlab/chain_config.hpp"
#include "repeaterlab/repeater_sim.hpp"

namespace rlab::cli {

/// Filesystem-level failure (missing input, unwritable output).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Strict schema: every ChainConfig field present, unknown keys rejected.
/// Errors name the offending key.
sim::ChainConfig config_from_json(const nlohmann::json& root);
nlohmann::json config_to_json(const sim::ChainConfig& config);

sim::ChainConfig load_config(const std::string& path);

/// Resolved default config as pretty JSON; reparsing it yields an identical
/// resolved config.
std::string default_config_text();

nlohmann::json result_to_json(const sim::SimResult& result);

/// Shortest round-trip decimal representation, locale independent.
std::string format_double(double value);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace rlab::cli
