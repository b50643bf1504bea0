#include "repeaterlab/bell_oracle.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "repeaterlab/errors.hpp"

namespace rlab::bell::oracle {

namespace {

using cd = std::complex<double>;
using Mat2 = std::array<cd, 4>;     // row-major 2x2
using Mat16 = std::array<cd, 256>;  // row-major 16x16
using Vec4 = std::array<cd, 4>;

constexpr cd kI{0.0, 1.0};

const Mat2 kPauliI{1, 0, 0, 1};
const Mat2 kPauliX{0, 1, 1, 0};
const Mat2 kPauliY{0, -kI, kI, 0};
const Mat2 kPauliZ{1, 0, 0, -1};

Mat2 rx(double phi) {
    const double c = std::cos(phi / 2), s = std::sin(phi / 2);
    return {cd{c, 0}, -kI * s, -kI * s, cd{c, 0}};
}

// Bell vectors on two qubits in the library's fixed component order.
const std::array<Vec4, 4> kBell = [] {
    const double r = 1.0 / std::numbers::sqrt2;
    std::array<Vec4, 4> b{};
    b[0] = {0, r, r, 0};   // Psi+
    b[1] = {0, r, -r, 0};  // Psi-
    b[2] = {r, 0, 0, r};   // Phi+
    b[3] = {r, 0, 0, -r};  // Phi-
    return b;
}();

Mat16 matmul(const Mat16& a, const Mat16& b) {
    Mat16 out{};
    for (int i = 0; i < 16; ++i)
        for (int k = 0; k < 16; ++k) {
            const cd aik = a[16 * i + k];
            if (aik == cd{}) continue;
            for (int j = 0; j < 16; ++j) out[16 * i + j] += aik * b[16 * k + j];
        }
    return out;
}

Mat16 conjugate(const Mat16& u, const Mat16& rho) {
    // u * rho * u^dagger
    Mat16 tmp = matmul(u, rho);
    Mat16 out{};
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            cd acc{};
            for (int k = 0; k < 16; ++k)
                acc += tmp[16 * i + k] * std::conj(u[16 * j + k]);
            out[16 * i + j] = acc;
        }
    return out;
}

// Qubit q in {0..3}, most significant bit first: basis index b0 b1 b2 b3.
Mat16 embed1(const Mat2& op, int q) {
    Mat16 out{};
    const int shift = 3 - q;
    for (int col = 0; col < 16; ++col) {
        const int bit = (col >> shift) & 1;
        for (int ob = 0; ob < 2; ++ob) {
            const cd amp = op[2 * ob + bit];
            if (amp == cd{}) continue;
            const int row = (col & ~(1 << shift)) | (ob << shift);
            out[16 * row + col] += amp;
        }
    }
    return out;
}

Mat16 embed_cnot(int control, int target) {
    Mat16 out{};
    const int cs = 3 - control, ts = 3 - target;
    for (int col = 0; col < 16; ++col) {
        int row = col;
        if ((col >> cs) & 1) row = col ^ (1 << ts);
        out[16 * row + col] = 1;
    }
    return out;
}

// rho of one pair from its Bell-diagonal populations (4x4, qubits (a,b)).
std::array<cd, 16> pair_density(const BellDiagonalState& v) {
    std::array<cd, 16> rho{};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                rho[4 * i + j] += v[k] * kBell[k][i] * std::conj(kBell[k][j]);
    return rho;
}

Mat16 two_pair_density(const BellDiagonalState& a, const BellDiagonalState& b) {
    const auto ra = pair_density(a);
    const auto rb = pair_density(b);
    // Qubit order (a1, b1, a2, b2): pair A on qubits 0,1 and pair B on 2,3.
    Mat16 out{};
    for (int i1 = 0; i1 < 4; ++i1)
        for (int j1 = 0; j1 < 4; ++j1)
            for (int i2 = 0; i2 < 4; ++i2)
                for (int j2 = 0; j2 < 4; ++j2)
                    out[16 * (4 * i1 + i2) + (4 * j1 + j2)] =
                        ra[4 * i1 + j1] * rb[4 * i2 + j2];
    return out;
}

double trace_real(const Mat16& rho) {
    double t = 0;
    for (int i = 0; i < 16; ++i) t += rho[16 * i + i].real();
    return t;
}

// Reduce to qubits (qa, qb), tracing out the other two.
std::array<cd, 16> reduce_to(const Mat16& rho, int qa, int qb) {
    std::array<cd, 16> out{};
    const int sa = 3 - qa, sb = 3 - qb;
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            // kept bits must coincide on traced-out positions
            const int itr = i & ~((1 << sa) | (1 << sb));
            const int jtr = j & ~((1 << sa) | (1 << sb));
            if (itr != jtr) continue;
            const int r = ((i >> sa) & 1) * 2 + ((i >> sb) & 1);
            const int c = ((j >> sa) & 1) * 2 + ((j >> sb) & 1);
            out[4 * r + c] += rho[16 * i + j];
        }
    return out;
}

BellDiagonalState bell_components(const std::array<cd, 16>& rho) {
    BellDiagonalState out;
    for (int k = 0; k < 4; ++k) {
        cd acc{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                acc += std::conj(kBell[k][i]) * rho[4 * i + j] * kBell[k][j];
        out[k] = acc.real();
    }
    return out;
}

OracleResult run_purify(const BellDiagonalState& a, const BellDiagonalState& b) {
    // Psi+-targeted round: the Phi+-targeted circuit (Rx(+-pi/2), bilateral
    // CNOT, coincidence keep) conjugated by X on the second station's qubits.
    const Mat16 w = matmul(embed1(kPauliX, 1), embed1(kPauliX, 3));
    Mat16 rot = matmul(embed1(rx(std::numbers::pi / 2), 0),
                       embed1(rx(std::numbers::pi / 2), 2));
    rot = matmul(rot, matmul(embed1(rx(-std::numbers::pi / 2), 1),
                             embed1(rx(-std::numbers::pi / 2), 3)));
    const Mat16 cnots = matmul(embed_cnot(0, 2), embed_cnot(1, 3));
    const Mat16 u = matmul(w, matmul(cnots, matmul(rot, w)));

    Mat16 rho = conjugate(u, two_pair_density(a, b));

    // Keep set: measured pair (qubits 2,3) anti-coincident, the X-conjugated
    // image of the coincidence condition.
    Mat16 kept{};
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            const int mi = ((i >> 1) & 1) * 2 + (i & 1);
            const int mj = ((j >> 1) & 1) * 2 + (j & 1);
            const bool iok = mi == 1 || mi == 2;
            const bool jok = mj == 1 || mj == 2;
            if (iok && jok) kept[16 * i + j] = rho[16 * i + j];
        }

    const double ps = trace_real(kept);
    OracleResult out;
    out.success_prob = ps;
    if (ps <= 1e-15) {
        out.success_prob = 0.0;
        return out;
    }
    auto red = reduce_to(kept, 0, 1);
    for (auto& e : red) e /= ps;
    out.state = bell_components(red);
    return out;
}

OracleResult run_swap(const BellDiagonalState& a, const BellDiagonalState& b,
                      bool keep_target) {
    // Qubits (A, B, B', C); Bell measurement on (B, B') = (1, 2), correction
    // on C, output pair (A, C) = (0, 3).
    // Correction tables per measured outcome, derived by requiring the
    // reference input (Phi+ x Phi+ or Psi+ x Psi+) to map to itself.
    const std::array<const Mat2*, 4> phi_frame{&kPauliX, &kPauliY, &kPauliI, &kPauliZ};
    const std::array<const Mat2*, 4> psi_frame{&kPauliI, &kPauliZ, &kPauliX, &kPauliY};
    const auto& frame = keep_target ? psi_frame : phi_frame;

    const Mat16 rho = two_pair_density(a, b);
    std::array<cd, 16> accum{};
    for (int k = 0; k < 4; ++k) {
        // projector |B_k><B_k| on qubits 1,2
        Mat16 proj{};
        for (int i1 = 0; i1 < 4; ++i1)
            for (int j1 = 0; j1 < 4; ++j1) {
                const cd amp = kBell[k][i1] * std::conj(kBell[k][j1]);
                if (amp == cd{}) continue;
                // i1 = bits (q1, q2) row, j1 = col; q0 and q3 untouched
                for (int b0 = 0; b0 < 2; ++b0)
                    for (int b3 = 0; b3 < 2; ++b3) {
                        const int row = (b0 << 3) | (i1 << 1) | b3;
                        const int col = (b0 << 3) | (j1 << 1) | b3;
                        proj[16 * row + col] = amp;
                    }
            }
        const Mat16 sel = conjugate(proj, rho);
        const double pk = trace_real(sel);
        if (pk <= 1e-15) continue;
        auto red = reduce_to(sel, 0, 3);

        // apply correction on the second qubit of the reduced pair
        const Mat2& uc = *frame[k];
        std::array<cd, 16> corr{};
        for (int i0 = 0; i0 < 2; ++i0)
            for (int i1 = 0; i1 < 2; ++i1)
                for (int j0 = 0; j0 < 2; ++j0)
                    for (int j1 = 0; j1 < 2; ++j1) {
                        cd acc{};
                        for (int x = 0; x < 2; ++x)
                            for (int y = 0; y < 2; ++y)
                                acc += uc[2 * i1 + x] * red[4 * (2 * i0 + x) + (2 * j0 + y)] *
                                       std::conj(uc[2 * j1 + y]);
                        corr[4 * (2 * i0 + i1) + (2 * j0 + j1)] = acc;
                    }
        for (int i = 0; i < 16; ++i) accum[i] += corr[i];
    }
    OracleResult out;
    out.success_prob = 1.0;  // all outcomes corrected and kept
    out.state = bell_components(accum);
    return out;
}

}  // namespace

OracleResult brute_force_oracle(const std::vector<BellDiagonalState>& states,
                                Circuit circuit) {
    if (states.size() != 2)
        throw ValidationError("brute_force_oracle expects exactly 2 input pairs");
    switch (circuit) {
        case Circuit::purify:
            return run_purify(states[0], states[1]);
        case Circuit::swap:
            return run_swap(states[0], states[1], false);
        case Circuit::swap_keep_target:
            return run_swap(states[0], states[1], true);
    }
    throw ValidationError("unknown oracle circuit");
}

}  // namespace rlab::bell::oracle
