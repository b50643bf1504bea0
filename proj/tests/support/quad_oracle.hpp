#pragma once

#include "repeaterlab/bell_state.hpp"
#include "repeaterlab/probe_model.hpp"

namespace rlab::test {

/// Window integrals of the conditional two-qubit state computed by adaptive
/// Gauss-Kronrod quadrature of the per-result diagonal, independent of the
/// erf closed forms under test.
struct QuadratureWindow {
    double success_prob = 0.0;
    bell::BellDiagonalState state;  // normalized postselected populations
    double fidelity = 0.0;
};

QuadratureWindow integrate_window(const probe::ProbeParams& params,
                                  double rel_tol = 1e-10);

}  // namespace rlab::test
