#include "repeaterlab/bell_algebra.hpp"

#include <array>

#include "repeaterlab/errors.hpp"

namespace rlab::bell {

namespace {

void check_noise(GateNoise noise) {
    if (!(noise.epsilon >= 0.0 && noise.epsilon < 1.0))
        throw ValidationError("epsilon must lie in [0, 1)");
}

void check_state(const BellDiagonalState& s) {
    if (!s.is_valid()) throw ValidationError("Bell-diagonal state is not normalized");
}

// Composition of Bell labels as Paulis: order (Psi+, Psi-, Phi+, Phi-)
// corresponds to (X, Y, I, Z); Phi+ is the identity element.
constexpr std::array<std::array<std::size_t, 4>, 4> kCompose{{
    {2, 3, 0, 1},
    {3, 2, 1, 0},
    {0, 1, 2, 3},
    {1, 0, 3, 2},
}};

}  // namespace

std::size_t klein_compose(std::size_t i, std::size_t j) {
    return kCompose[i][j];
}

BellDiagonalState apply_gate_noise(const BellDiagonalState& state, GateNoise noise) {
    check_noise(noise);
    const double reliable = (1.0 - noise.epsilon) * (1.0 - noise.epsilon);
    BellDiagonalState out;
    for (std::size_t i = 0; i < 4; ++i)
        out[i] = reliable * state[i] + (1.0 - reliable) * 0.25;
    return out;
}

PurifyResult purify(const BellDiagonalState& pair_a, const BellDiagonalState& pair_b,
                    GateNoise noise) {
    check_state(pair_a);
    check_state(pair_b);
    const BellDiagonalState a = apply_gate_noise(pair_a, noise);
    const BellDiagonalState b = apply_gate_noise(pair_b, noise);

    // Coincidence probability of the bilateral-CNOT / rotate / measure round.
    const double success =
        (a[0] + a[3]) * (b[0] + b[3]) + (a[1] + a[2]) * (b[1] + b[2]);
    if (success <= 0.0) return {0.0, std::nullopt};

    BellDiagonalState out;
    out[0] = (a[0] * b[0] + a[3] * b[3]) / success;
    out[1] = (a[0] * b[3] + a[3] * b[0]) / success;
    out[2] = (a[2] * b[2] + a[1] * b[1]) / success;
    out[3] = (a[2] * b[1] + a[1] * b[2]) / success;
    return {success, out};
}

BellDiagonalState swap(const BellDiagonalState& pair_ab, const BellDiagonalState& pair_bc,
                       GateNoise noise) {
    check_state(pair_ab);
    check_state(pair_bc);
    const BellDiagonalState a = apply_gate_noise(pair_ab, noise);
    const BellDiagonalState& b = pair_bc;
    BellDiagonalState out{{0.0, 0.0, 0.0, 0.0}};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) out[kCompose[i][j]] += a[i] * b[j];
    return out;
}

BellDiagonalState swap_keep_target(const BellDiagonalState& pair_ab,
                                   const BellDiagonalState& pair_bc, GateNoise noise) {
    const BellDiagonalState s = swap(pair_ab, pair_bc, noise);
    // Outcome-independent X in the correction frame: exchange Psi+- <-> Phi+-.
    return BellDiagonalState{{s[2], s[3], s[0], s[1]}};
}

}  // namespace rlab::bell
