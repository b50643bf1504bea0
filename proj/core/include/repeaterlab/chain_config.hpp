#pragma once

#include <cstdint>
#include <vector>

#include "repeaterlab/bell_state.hpp"
#include "repeaterlab/probe_model.hpp"

namespace rlab::sim {

/// How the elementary-link parameters are obtained.
struct ProbeConfig {
    enum class Mode {
        optimized,  // d maximizing window fidelity at the segment's eta
        fixed,      // explicit distinguishability d
        ideal,      // perfect links: P_s = 1, state = pure target
    };

    Mode mode = Mode::optimized;
    double p_c = 0.5;
    double theta = probe::kDefaultTheta;  // recovers alpha = d / sin(theta)
    double d = 0.0;                       // used by Mode::fixed
    bool zero_xi = true;
};

struct NoiseConfig {
    double epsilon = 0.0;
    bool on_purification = true;  // apply the gate channel inside purify
    bool on_swap = true;          // apply the gate channel inside swap
};

/// Geometry, resources and protocol parameters of one repeater chain.
struct ChainConfig {
    double total_length_km = 160.0;
    double segment_length_km = 10.0;
    int qubits_per_station = 0;  // 0 resolves to qubit_budget(...)
    double fiber_loss_db_per_km = 0.17;
    double light_speed_km_per_ms = 200.0;
    int target_pairs = 9;
    std::uint64_t rng_seed = 0;
    ProbeConfig probe;
    NoiseConfig noise;
    // Purification rounds per nesting level: [s_0, ..., s_{L-1}, s_final];
    // empty resolves to the preset for the chain's depth.
    std::vector<int> purification_schedule;
};

/// Minimum qubits per station for the nested protocol: 2 + 2 log2(L/l).
/// Throws ValidationError when the segment count is not a power of two.
int qubit_budget(double total_length_km, double segment_length_km);

/// Number of swap levels, log2(segment count).
int nesting_levels(const ChainConfig& config);

/// Preset purification schedule for a chain with the given number of levels
/// (length levels + 1, final entry = rounds after the last swap).
std::vector<int> default_schedule(int levels);

/// Throws ValidationError naming the offending field.
void validate(const ChainConfig& config);

/// Copy with every defaulted field materialized (qubit budget, schedule).
ChainConfig resolved(const ChainConfig& config);

/// Per-segment link parameters, computed once per run (segments are
/// homogeneous): success probability of one attempt and the postselected
/// Bell-diagonal state it creates.
struct LinkModel {
    double success_prob = 1.0;
    bell::BellDiagonalState state;
    double d = 0.0;  // distinguishability in use (0 for ideal links)
    double eta = 1.0;
};

LinkModel resolve_link_model(const ChainConfig& config);

}  // namespace rlab::sim
