#include "repeaterlab/chain_config.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "repeaterlab/errors.hpp"

namespace rlab::sim {

namespace {

// Segment count as an exact integer, or -1 when the ratio is not integral.
long segment_count(double total_km, double segment_km) {
    if (!(total_km > 0.0) || !(segment_km > 0.0)) return -1;
    const double ratio = total_km / segment_km;
    const long n = std::lround(ratio);
    if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio) return -1;
    return n;
}

}  // namespace

int qubit_budget(double total_length_km, double segment_length_km) {
    const long n = segment_count(total_length_km, segment_length_km);
    if (n < 1 || !std::has_single_bit(static_cast<unsigned long>(n)))
        throw ValidationError(
            "total_length_km / segment_length_km must be a power of 2, got " +
            std::to_string(total_length_km / segment_length_km));
    return 2 + 2 * std::countr_zero(static_cast<unsigned long>(n));
}

int nesting_levels(const ChainConfig& config) {
    qubit_budget(config.total_length_km, config.segment_length_km);  // validates ratio
    const long n = segment_count(config.total_length_km, config.segment_length_km);
    return std::countr_zero(static_cast<unsigned long>(n));
}

std::vector<int> default_schedule(int levels) {
    if (levels < 0) throw ValidationError("levels must be >= 0");
    switch (levels) {
        case 0: return {2};
        case 1: return {3, 0};
        case 2: return {3, 2, 0};
        case 3: return {3, 2, 1, 0};
        case 4: return {3, 2, 2, 1, 0};
        default: {
            // deeper chains need pumping at every level to hold fidelity
            std::vector<int> s{3, 2};
            s.resize(static_cast<std::size_t>(levels) + 1, 1);
            return s;
        }
    }
}

void validate(const ChainConfig& c) {
    if (!(c.total_length_km > 0.0)) throw ValidationError("total_length_km must be > 0");
    if (!(c.segment_length_km > 0.0))
        throw ValidationError("segment_length_km must be > 0");
    const int budget = qubit_budget(c.total_length_km, c.segment_length_km);

    if (c.qubits_per_station != 0 && c.qubits_per_station < 2)
        throw ValidationError("qubits_per_station must be >= 2");
    if (c.qubits_per_station != 0 && c.qubits_per_station < budget &&
        c.purification_schedule.empty())
        throw ValidationError(
            "qubits_per_station below the default budget (" + std::to_string(budget) +
            ") requires an explicit purification_schedule");

    if (!(c.fiber_loss_db_per_km >= 0.0))
        throw ValidationError("fiber_loss_db_per_km must be >= 0");
    if (!(c.light_speed_km_per_ms > 0.0))
        throw ValidationError("light_speed_km_per_ms must be > 0");
    if (c.target_pairs < 1) throw ValidationError("target_pairs must be >= 1");

    if (!(c.noise.epsilon >= 0.0 && c.noise.epsilon < 1.0))
        throw ValidationError("noise.epsilon must lie in [0, 1)");

    if (c.probe.mode != ProbeConfig::Mode::ideal) {
        if (!(c.probe.p_c > 0.0)) throw ValidationError("probe.p_c must be > 0");
        if (!(c.probe.theta > 0.0 && c.probe.theta < std::numbers::pi / 2))
            throw ValidationError("probe.theta must lie in (0, pi/2)");
    }
    if (c.probe.mode == ProbeConfig::Mode::fixed && !(c.probe.d > 0.0))
        throw ValidationError("probe.d must be > 0 in fixed mode");

    if (!c.purification_schedule.empty()) {
        const int levels = nesting_levels(c);
        if (c.purification_schedule.size() != static_cast<std::size_t>(levels) + 1)
            throw ValidationError("purification_schedule must have " +
                                  std::to_string(levels + 1) + " entries (levels + final)");
        for (int s : c.purification_schedule)
            if (s < 0) throw ValidationError("purification_schedule entries must be >= 0");
    }
}

ChainConfig resolved(const ChainConfig& config) {
    validate(config);
    ChainConfig out = config;
    if (out.qubits_per_station == 0)
        out.qubits_per_station =
            qubit_budget(out.total_length_km, out.segment_length_km);
    if (out.purification_schedule.empty())
        out.purification_schedule = default_schedule(nesting_levels(out));
    return out;
}

LinkModel resolve_link_model(const ChainConfig& config) {
    LinkModel out;
    if (config.probe.mode == ProbeConfig::Mode::ideal) {
        out.success_prob = 1.0;
        out.state = bell::BellDiagonalState{{1.0, 0.0, 0.0, 0.0}};
        return out;
    }
    const double eta_sq = probe::fiber_transmission(config.segment_length_km,
                                                    config.fiber_loss_db_per_km);
    out.eta = std::sqrt(eta_sq);
    if (config.probe.mode == ProbeConfig::Mode::optimized) {
        out.d = probe::optimize_distinguishability(config.probe.p_c, out.eta).d_opt;
    } else {
        out.d = config.probe.d;
    }
    probe::ProbeParams params = probe::params_for_distinguishability(
        out.d, config.probe.p_c, out.eta, config.probe.theta);
    params.zero_xi = config.probe.zero_xi;
    out.success_prob = probe::success_probability(params);
    out.state = probe::postselected_state(params);
    return out;
}

}  // namespace rlab::sim
