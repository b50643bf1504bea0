#pragma once

#include <complex>

#include "repeaterlab/bell_state.hpp"

namespace rlab::probe {

/// Physical parameters of one entanglement-distribution attempt over a lossy
/// segment: a bright coherent probe of amplitude alpha picks up a conditional
/// phase theta per qubit interaction, travels a channel with amplitude
/// transmission eta, and is measured in the p quadrature (p = (a - a^dag)/2i);
/// the pair is kept when |p| < p_c.
struct ProbeParams {
    double alpha = 0.0;  // probe amplitude, real >= 0
    double theta = 0.01;  // conditional phase shift per interaction (rad)
    double eta = 1.0;  // amplitude transmission in (0, 1]; power = eta^2
    double p_c = 0.5;  // postselection window half-width, >= 0
    bool zero_xi = true;  // cancel the deterministic loss-induced phase xi
};

/// Default theta used when a physical alpha must be recovered from an
/// optimized distinguishability d (alpha = d / sin(theta)).
inline constexpr double kDefaultTheta = 0.01;

/// Throws ValidationError when a field is out of range.
void validate(const ProbeParams& params);

/// d = alpha * sin(theta): phase-space separation of the probe components.
double distinguishability(const ProbeParams& params);

struct DecoherenceParams {
    double gamma = 0.0;  // damping exponent of the Psi+/Psi- coherence
    double xi = 0.0;  // deterministic loss-induced phase (before cancellation)
};

/// gamma = alpha^2 (1 - eta^2)(1 - cos theta), xi = alpha^2 (1 - eta^2) sin theta.
/// With small_angle set, gamma is replaced by the quadratic form (1-eta^2) d^2 / 2.
DecoherenceParams decoherence_params(const ProbeParams& params, bool small_angle = false);

/// b_s = sqrt(2) (p_c + s eta d) for s in {-1, 0, +1}; arguments of the erf
/// terms in all closed-form window integrals.
double b_coeff(int s, const ProbeParams& params);

/// Complex amplitude C_s(p) = G_s(p) K_s(p) of the conditional probe state,
/// with the loss substitution alpha -> eta alpha, d -> eta d applied:
///   G_s(p) = (2/pi)^{1/4} exp[-(p - s eta d)^2]
///   K_0(p) = exp(-2 i eta alpha p)
///   K_r(p) = exp[-i eta alpha cos(theta) (2p - r eta d)],  r = +-1
std::complex<double> amplitude_c(double p, int s, const ProbeParams& params);

/// Unnormalized diagonal elements of the conditional two-qubit state at
/// homodyne result p, in the same component order as BellDiagonalState.
struct ConditionalDiagonal {
    double psi_plus = 0.0;
    double psi_minus = 0.0;
    double phi_plus = 0.0;
    double phi_minus = 0.0;

    double trace() const { return psi_plus + psi_minus + phi_plus + phi_minus; }
};

/// Evaluates the four diagonal elements at measurement result p:
///   <Psi+-|rho(p)|Psi+-> = |C0|^2 (1 +- e^{-gamma} cos xi) / 4
///   <Phi+-|rho(p)|Phi+-> = (|C1|^2 + |C-1|^2)/8 +- e^{-gamma} Re[e^{i xi} C1 C-1^*]/4
/// xi is zeroed first when params.zero_xi is set. Throws NumericalError if an
/// element falls below -1e-12.
ConditionalDiagonal conditional_diagonal(double p, const ProbeParams& params);

/// Window integral of the trace: P_s = erf(b0)/2 + erf(b1)/4 + erf(b-1)/4.
double success_probability(const ProbeParams& params);

/// Fidelity of the postselected pair with respect to Psi+:
/// F = erf(b0)(1 + e^{-gamma} cos xi) / (2 erf(b0) + erf(b1) + erf(b-1)).
/// Throws UndefinedResultError when the window has zero success probability.
double postselected_fidelity(const ProbeParams& params);

/// Normalized Bell-diagonal state of a pair that passed postselection: each
/// diagonal element integrated over |p| < p_c and divided by P_s. The Psi+
/// component equals postselected_fidelity(params).
bell::BellDiagonalState postselected_state(const ProbeParams& params);

struct OptimizationResult {
    double d_opt = 0.0;
    double f_max = 0.0;
    double p_s = 0.0;
    bool boundary_hit = false;  // optimum pinned at the search-range edge
};

/// Maximizes the window fidelity over the distinguishability d at fixed
/// (p_c, eta), using the small-angle damping gamma = (1-eta^2) d^2 / 2 (the
/// parameterization in which the trade-off depends on (p_c, d, eta) alone).
/// Golden-section refinement over a coarse grid on d in (0, 5]; |d - d*| <= 1e-6.
OptimizationResult optimize_distinguishability(double p_c, double eta);

/// Effective controlled phase of the dispersive two-qubit gate sequence:
/// phi = T (1 + T) alpha^2 theta^2, where T is the local transmission.
double gate_phase(double transmission_t, double alpha, double theta);

/// Power transmission eta^2 = 10^(-loss_db_per_km * length_km / 10).
double fiber_transmission(double length_km, double loss_db_per_km);

/// ProbeParams whose distinguishability equals d at the given (p_c, eta),
/// recovering alpha = d / sin(theta).
ProbeParams params_for_distinguishability(double d, double p_c, double eta,
                                          double theta = kDefaultTheta);

}  // namespace rlab::probe
