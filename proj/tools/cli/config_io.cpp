#include "config_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <set>

#include "repeaterlab/errors.hpp"

namespace rlab::cli {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& scope,
                const std::set<std::string>& allowed) {
    for (const auto& item : obj.items())
        if (!allowed.contains(item.key()))
            throw ValidationError("unknown config key: " + scope + item.key());
    for (const auto& key : allowed)
        if (!obj.contains(key))
            throw ValidationError("missing config key: " + scope + key);
}

double get_number(const json& obj, const std::string& scope, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ValidationError("config key " + scope + key + " must be a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& scope, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw ValidationError("config key " + scope + key + " must be an integer");
    return v.get<int>();
}

std::uint64_t get_uint64(const json& obj, const std::string& scope, const char* key) {
    const json& v = obj.at(key);
    const bool negative =
        v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0;
    if (!v.is_number_integer() || negative)
        throw ValidationError("config key " + scope + key +
                              " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

bool get_bool(const json& obj, const std::string& scope, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_boolean())
        throw ValidationError("config key " + scope + key + " must be a boolean");
    return v.get<bool>();
}

sim::ProbeConfig::Mode mode_from_string(const std::string& s) {
    if (s == "optimized") return sim::ProbeConfig::Mode::optimized;
    if (s == "fixed") return sim::ProbeConfig::Mode::fixed;
    if (s == "ideal") return sim::ProbeConfig::Mode::ideal;
    throw ValidationError("config key probe.mode must be one of "
                          "\"optimized\", \"fixed\", \"ideal\"; got \"" + s + "\"");
}

const char* mode_to_string(sim::ProbeConfig::Mode mode) {
    switch (mode) {
        case sim::ProbeConfig::Mode::optimized: return "optimized";
        case sim::ProbeConfig::Mode::fixed: return "fixed";
        case sim::ProbeConfig::Mode::ideal: return "ideal";
    }
    return "optimized";
}

}  // namespace

sim::ChainConfig config_from_json(const json& root) {
    if (!root.is_object()) throw ValidationError("config root must be a JSON object");
    check_keys(root, "",
               {"total_length_km", "segment_length_km", "qubits_per_station",
                "fiber_loss_db_per_km", "light_speed_km_per_ms", "target_pairs",
                "rng_seed", "probe", "noise", "purification_schedule"});

    sim::ChainConfig c;
    c.total_length_km = get_number(root, "", "total_length_km");
    c.segment_length_km = get_number(root, "", "segment_length_km");
    c.qubits_per_station = get_int(root, "", "qubits_per_station");
    c.fiber_loss_db_per_km = get_number(root, "", "fiber_loss_db_per_km");
    c.light_speed_km_per_ms = get_number(root, "", "light_speed_km_per_ms");
    c.target_pairs = get_int(root, "", "target_pairs");
    c.rng_seed = get_uint64(root, "", "rng_seed");

    const json& probe = root.at("probe");
    if (!probe.is_object()) throw ValidationError("config key probe must be an object");
    check_keys(probe, "probe.", {"mode", "p_c", "theta", "d", "zero_xi"});
    const json& mode = probe.at("mode");
    if (!mode.is_string())
        throw ValidationError("config key probe.mode must be a string");
    c.probe.mode = mode_from_string(mode.get<std::string>());
    c.probe.p_c = get_number(probe, "probe.", "p_c");
    c.probe.theta = get_number(probe, "probe.", "theta");
    c.probe.d = get_number(probe, "probe.", "d");
    c.probe.zero_xi = get_bool(probe, "probe.", "zero_xi");

    const json& noise = root.at("noise");
    if (!noise.is_object()) throw ValidationError("config key noise must be an object");
    check_keys(noise, "noise.", {"epsilon", "on_purification", "on_swap"});
    c.noise.epsilon = get_number(noise, "noise.", "epsilon");
    c.noise.on_purification = get_bool(noise, "noise.", "on_purification");
    c.noise.on_swap = get_bool(noise, "noise.", "on_swap");

    const json& schedule = root.at("purification_schedule");
    if (!schedule.is_array())
        throw ValidationError("config key purification_schedule must be an array");
    c.purification_schedule.clear();
    for (const json& entry : schedule) {
        if (!entry.is_number_integer())
            throw ValidationError(
                "config key purification_schedule must hold integers");
        c.purification_schedule.push_back(entry.get<int>());
    }
    return c;
}

json config_to_json(const sim::ChainConfig& c) {
    return json{
        {"total_length_km", c.total_length_km},
        {"segment_length_km", c.segment_length_km},
        {"qubits_per_station", c.qubits_per_station},
        {"fiber_loss_db_per_km", c.fiber_loss_db_per_km},
        {"light_speed_km_per_ms", c.light_speed_km_per_ms},
        {"target_pairs", c.target_pairs},
        {"rng_seed", c.rng_seed},
        {"probe",
         {{"mode", mode_to_string(c.probe.mode)},
          {"p_c", c.probe.p_c},
          {"theta", c.probe.theta},
          {"d", c.probe.d},
          {"zero_xi", c.probe.zero_xi}}},
        {"noise",
         {{"epsilon", c.noise.epsilon},
          {"on_purification", c.noise.on_purification},
          {"on_swap", c.noise.on_swap}}},
        {"purification_schedule", c.purification_schedule},
    };
}

sim::ChainConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file: " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config parse error in " + path + ": " + e.what());
    }
    return config_from_json(root);
}

std::string default_config_text() {
    return config_to_json(sim::resolved(sim::ChainConfig{})).dump(2) + "\n";
}

json result_to_json(const sim::SimResult& r) {
    return json{
        {"arrival_times_ms", r.arrival_times_ms},
        {"mean_interarrival_ms", r.mean_interarrival_ms},
        {"std_interarrival_ms", r.std_interarrival_ms},
        {"rate_hz", r.rate_hz},
        {"mean_final_fidelity", r.mean_final_fidelity},
        {"std_final_fidelity", r.std_final_fidelity},
        {"seed", r.seed},
        {"config", config_to_json(r.config)},
    };
}

std::string format_double(double value) {
    if (!std::isfinite(value))
        throw NumericalError("refusing to format a non-finite value");
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw NumericalError("decimal formatting failed");
    return std::string(buf.data(), ptr);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing output file: " + path);
}

}  // namespace rlab::cli
