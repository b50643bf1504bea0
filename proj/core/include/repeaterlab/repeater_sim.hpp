#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "repeaterlab/bell_state.hpp"
#include "repeaterlab/chain_config.hpp"

namespace rlab::sim {

/// One live entangled pair between two stations.
struct PairRecord {
    int left_station = 0;
    int right_station = 0;
    bell::BellDiagonalState state;
    int nesting_level = 0;  // span = segment_length * 2^level
    int rounds_done = 0;    // completed purification rounds at this level
    double created_at_ms = 0.0;
};

/// Consumption tree of a delivered pair; replaying it through the Bell maps
/// must reproduce the delivered state exactly.
struct LineageNode {
    enum class Kind : std::uint8_t { link, purify, swap } kind = Kind::link;
    std::shared_ptr<const LineageNode> a;  // purify: kept input; swap: left pair
    std::shared_ptr<const LineageNode> b;  // purify: sacrificed input; swap: right pair
};

struct DeliveredPair {
    double time_ms = 0.0;
    bell::BellDiagonalState state;
    std::shared_ptr<const LineageNode> lineage;  // only when recording enabled
};

struct SimResult {
    std::vector<double> arrival_times_ms;  // strictly increasing ticks of delivery
    double mean_interarrival_ms = 0.0;     // 0 when fewer than 2 arrivals
    double std_interarrival_ms = 0.0;
    double rate_hz = 0.0;  // 1000 / mean_interarrival_ms
    double mean_final_fidelity = 0.0;
    double std_final_fidelity = 0.0;
    ChainConfig config;  // resolved echo
    std::uint64_t seed = 0;
};

struct RunOptions {
    bool record_lineage = false;    // keep consumption trees of delivered pairs
    bool audit_invariants = false;  // qubit-conservation check after every step
};

/// Extra per-run observables beyond the SimResult summary.
struct RunTrace {
    std::vector<DeliveredPair> delivered;
};

/// Executes the discrete-event protocol loop until target_pairs end-to-end
/// pairs are delivered. Identical config + seed give a bit-identical result.
/// Throws SimDeadlockError when the event queue runs dry first.
SimResult run(const ChainConfig& config);
SimResult run(const ChainConfig& config, const RunOptions& options, RunTrace* trace);

/// One result per epsilon value; the config's epsilon is replaced point-wise
/// and the seed advances as base + point_index * runs_per_point + run_index.
/// With runs_per_point > 1 the entry is an aggregate: rate/fidelity fields are
/// means across runs, std fields are across-run spreads, and the arrival-time
/// list is left empty.
std::vector<SimResult> sweep_epsilon(const ChainConfig& config,
                                     const std::vector<double>& epsilons,
                                     int runs_per_point);

/// Recomputes a delivered state bottom-up from its consumption tree using the
/// same Bell maps and noise switches the engine used.
bell::BellDiagonalState replay_lineage(const LineageNode& node, const LinkModel& link,
                                       const NoiseConfig& noise);

}  // namespace rlab::sim
