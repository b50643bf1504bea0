#pragma once

#include <optional>

#include "repeaterlab/bell_state.hpp"

namespace rlab::bell {

/// Outcome of one purification round. success_prob = 0 carries no state
/// (nothing to keep), which is distinct from a numerical failure (throw).
struct PurifyResult {
    double success_prob = 0.0;
    std::optional<BellDiagonalState> state;
};

/// One recurrence round of the two-pair purification protocol, targeted at
/// Psi+ (the fixed local relabeling of the Phi+-targeted original). With
/// epsilon > 0 the depolarizing gate channel is applied to both input pairs
/// before the ideal map (bilateral gates: one local two-qubit gate per end).
PurifyResult purify(const BellDiagonalState& pair_a, const BellDiagonalState& pair_b,
                    GateNoise noise);

/// Entanglement swapping of pairs A-B and B-C into one A-C pair. Bell-state
/// labels compose as Paulis (Psi+ <-> X, Psi- <-> Y, Phi+ <-> I, Phi- <-> Z):
/// out[k] = sum_i a[i] b[i o k]. The measurement outcomes are absorbed by
/// classically tracked Pauli corrections, so the map is deterministic. This
/// variant uses the corrections that fix Phi+ (the group identity):
/// swap(Phi+, Phi+) = Phi+. With epsilon > 0 the gate channel is applied once
/// (a single two-qubit gate at the middle station).
BellDiagonalState swap(const BellDiagonalState& pair_ab, const BellDiagonalState& pair_bc,
                       GateNoise noise);

/// Same measurement statistics as swap(), but with the outcome corrections
/// chosen to preserve the distribution target: swap_keep_target(Psi+, Psi+) =
/// Psi+. Differs from swap() by the outcome-independent relabeling that
/// exchanges Psi+- with Phi+- (multiplication by X in the label group). The
/// repeater chain uses this variant so that fidelity stays referenced to Psi+
/// at every nesting level.
BellDiagonalState swap_keep_target(const BellDiagonalState& pair_ab,
                                   const BellDiagonalState& pair_bc, GateNoise noise);

/// Depolarizing channel of one local two-qubit gate acting on a pair:
/// (1-eps)^2 * state + (1 - (1-eps)^2) * (1/4, 1/4, 1/4, 1/4).
BellDiagonalState apply_gate_noise(const BellDiagonalState& state, GateNoise noise);

/// Klein-four composition of Bell labels under the Pauli correspondence;
/// klein_compose(i, j) is the index of P_i P_j.
std::size_t klein_compose(std::size_t i, std::size_t j);

}  // namespace rlab::bell
