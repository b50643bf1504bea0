#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace rlab::bell {

/// Fixed component order of every Bell-diagonal 4-vector in this library.
enum BellIndex : std::size_t {
    kPsiPlus = 0,   // (|01> + |10>)/sqrt(2), the distribution target
    kPsiMinus = 1,  // (|01> - |10>)/sqrt(2)
    kPhiPlus = 2,   // (|00> + |11>)/sqrt(2)
    kPhiMinus = 3,  // (|00> - |11>)/sqrt(2)
};

/// Populations of one entangled pair in the fixed basis order
/// (Psi+, Psi-, Phi+, Phi-). Components are probabilities summing to 1.
struct BellDiagonalState {
    std::array<double, 4> v{1.0, 0.0, 0.0, 0.0};

    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }

    /// Overlap with the target state Psi+.
    double fidelity() const { return v[kPsiPlus]; }

    double sum() const { return v[0] + v[1] + v[2] + v[3]; }

    bool is_valid(double tol = 1e-9) const {
        for (double c : v)
            if (!(c >= -tol && c <= 1.0 + tol) || std::isnan(c)) return false;
        return std::abs(sum() - 1.0) <= tol;
    }
};

inline BellDiagonalState maximally_mixed() {
    return BellDiagonalState{{0.25, 0.25, 0.25, 0.25}};
}

/// Local optical loss per two-qubit gate; epsilon = 1 - T where T is the
/// transmission of the local probe interaction.
struct GateNoise {
    double epsilon = 0.0;
};

}  // namespace rlab::bell
