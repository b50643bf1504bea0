#pragma once

#include <vector>

#include "repeaterlab/bell_state.hpp"

namespace rlab::bell::oracle {

enum class Circuit {
    purify,            // bilateral CNOT + rotations, anti-coincidence keep
    swap,              // Bell measurement, corrections fixing Phi+
    swap_keep_target,  // Bell measurement, corrections fixing Psi+
};

struct OracleResult {
    double success_prob = 0.0;
    BellDiagonalState state;
};

/// Exact two-pair (4-qubit, 16x16 density matrix) simulation of the ideal
/// purification or swapping circuit: unitaries and projective measurements
/// applied densely, outcome statistics returned. Test reference only; no gate
/// noise. Expects exactly two input pairs (throws ValidationError otherwise).
OracleResult brute_force_oracle(const std::vector<BellDiagonalState>& states,
                                Circuit circuit);

}  // namespace rlab::bell::oracle
