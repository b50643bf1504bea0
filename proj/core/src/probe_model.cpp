#include "repeaterlab/probe_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "repeaterlab/errors.hpp"

namespace rlab::probe {

namespace {

constexpr double kNegativityTol = 1e-12;
constexpr double kGridUpper = 5.0;  // search range (0, 5] for d
constexpr int kGridPoints = 64;
constexpr double kGoldenTol = 1e-6;

double sq(double x) { return x * x; }

}  // namespace

void validate(const ProbeParams& p) {
    if (!(p.alpha >= 0.0)) throw ValidationError("alpha must be >= 0");
    if (!(p.theta > 0.0 && p.theta < std::numbers::pi / 2))
        throw ValidationError("theta must lie in (0, pi/2)");
    if (!(p.eta > 0.0 && p.eta <= 1.0)) throw ValidationError("eta must lie in (0, 1]");
    if (!(p.p_c >= 0.0)) throw ValidationError("p_c must be >= 0");
}

double distinguishability(const ProbeParams& p) {
    return p.alpha * std::sin(p.theta);
}

DecoherenceParams decoherence_params(const ProbeParams& p, bool small_angle) {
    const double lost = 1.0 - sq(p.eta);
    DecoherenceParams out;
    out.xi = sq(p.alpha) * lost * std::sin(p.theta);
    if (small_angle) {
        out.gamma = 0.5 * lost * sq(distinguishability(p));
    } else {
        out.gamma = sq(p.alpha) * lost * (1.0 - std::cos(p.theta));
    }
    return out;
}

double b_coeff(int s, const ProbeParams& p) {
    return std::numbers::sqrt2 * (p.p_c + s * p.eta * distinguishability(p));
}

std::complex<double> amplitude_c(double p, int s, const ProbeParams& params) {
    const double ea = params.eta * params.alpha;
    const double ed = params.eta * distinguishability(params);
    const double gauss = std::pow(2.0 / std::numbers::pi, 0.25) * std::exp(-sq(p - s * ed));
    double phase;
    if (s == 0) {
        phase = -2.0 * ea * p;
    } else {
        phase = -ea * std::cos(params.theta) * (2.0 * p - s * ed);
    }
    return std::polar(gauss, phase);
}

ConditionalDiagonal conditional_diagonal(double p, const ProbeParams& params) {
    const auto dec = decoherence_params(params);
    const double xi = params.zero_xi ? 0.0 : dec.xi;
    const double damp = std::exp(-dec.gamma);

    const double c0sq = std::norm(amplitude_c(p, 0, params));
    const std::complex<double> c1 = amplitude_c(p, 1, params);
    const std::complex<double> cm = amplitude_c(p, -1, params);
    const double cross =
        (std::polar(damp, xi) * c1 * std::conj(cm)).real();

    ConditionalDiagonal out;
    out.psi_plus = c0sq * (1.0 + damp * std::cos(xi)) / 4.0;
    out.psi_minus = c0sq * (1.0 - damp * std::cos(xi)) / 4.0;
    const double base = (std::norm(c1) + std::norm(cm)) / 8.0;
    out.phi_plus = base + cross / 4.0;
    out.phi_minus = base - cross / 4.0;

    for (double* e : {&out.psi_plus, &out.psi_minus, &out.phi_plus, &out.phi_minus}) {
        if (*e < -kNegativityTol)
            throw NumericalError("conditional diagonal element negative: " +
                                 std::to_string(*e));
        *e = std::max(*e, 0.0);
    }
    return out;
}

double success_probability(const ProbeParams& p) {
    return std::erf(b_coeff(0, p)) / 2.0 + std::erf(b_coeff(1, p)) / 4.0 +
           std::erf(b_coeff(-1, p)) / 4.0;
}

namespace {

// Window fidelity as a pure function of (p_c, eta, d, gamma); shared by the
// exact evaluation and the small-angle optimizer.
double fidelity_closed(double p_c, double eta, double d, double gamma, double xi) {
    const double b0 = std::erf(std::numbers::sqrt2 * p_c);
    const double b1 = std::erf(std::numbers::sqrt2 * (p_c + eta * d));
    const double bm = std::erf(std::numbers::sqrt2 * (p_c - eta * d));
    const double denom = 2.0 * b0 + b1 + bm;
    if (denom <= 0.0)
        throw UndefinedResultError("postselection window has zero success probability");
    return b0 * (1.0 + std::exp(-gamma) * std::cos(xi)) / denom;
}

}  // namespace

double postselected_fidelity(const ProbeParams& p) {
    if (p.p_c <= 0.0)
        throw UndefinedResultError("fidelity undefined at p_c = 0 (0/0 window limit)");
    const auto dec = decoherence_params(p);
    const double xi = p.zero_xi ? 0.0 : dec.xi;
    return fidelity_closed(p.p_c, p.eta, distinguishability(p), dec.gamma, xi);
}

bell::BellDiagonalState postselected_state(const ProbeParams& p) {
    if (p.p_c <= 0.0)
        throw UndefinedResultError("state undefined at p_c = 0 (0/0 window limit)");
    const auto dec = decoherence_params(p);
    const double xi = p.zero_xi ? 0.0 : dec.xi;
    const double damp = std::exp(-dec.gamma);
    const double d = distinguishability(p);

    const double e0 = std::erf(b_coeff(0, p));
    const double e1 = std::erf(b_coeff(1, p));
    const double em = std::erf(b_coeff(-1, p));

    // Window integrals of the four diagonal elements. The C1 C-1^* product has
    // the p-independent phase 2 eta^2 alpha d cos(theta), so its integral is
    // the Psi Gaussian window times a constant envelope exp(-2 eta^2 d^2).
    const double cross_phase = xi + 2.0 * sq(p.eta) * p.alpha * d * std::cos(p.theta);
    const double cross = damp * e0 * std::exp(-2.0 * sq(p.eta * d)) *
                         std::cos(cross_phase) / 4.0;
    const double base = (e1 + em) / 8.0;

    bell::BellDiagonalState out;
    out[bell::kPsiPlus] = e0 * (1.0 + damp * std::cos(xi)) / 4.0;
    out[bell::kPsiMinus] = e0 * (1.0 - damp * std::cos(xi)) / 4.0;
    out[bell::kPhiPlus] = base + cross;
    out[bell::kPhiMinus] = base - cross;

    const double ps = out.sum();
    if (ps <= 0.0)
        throw UndefinedResultError("postselection window has zero success probability");
    for (double& c : out.v) {
        if (c < -kNegativityTol)
            throw NumericalError("integrated state component negative: " +
                                 std::to_string(c));
        c = std::max(c, 0.0) / ps;
    }
    return out;
}

OptimizationResult optimize_distinguishability(double p_c, double eta) {
    if (!(p_c > 0.0)) throw ValidationError("p_c must be > 0 for optimization");
    if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in (0, 1]");

    const auto f = [p_c, eta](double d) {
        const double gamma = 0.5 * (1.0 - sq(eta)) * sq(d);
        return fidelity_closed(p_c, eta, d, gamma, 0.0);
    };

    // Coarse grid to bracket the maximum (F can be nearly flat for eta ~ 1).
    double best_d = kGridUpper / kGridPoints;
    double best_f = f(best_d);
    int best_i = 0;
    for (int i = 1; i < kGridPoints; ++i) {
        const double d = (i + 1) * kGridUpper / kGridPoints;
        const double fd = f(d);
        if (fd > best_f) {
            best_f = fd;
            best_d = d;
            best_i = i;
        }
    }
    const bool boundary = best_i == kGridPoints - 1;
    double lo = std::max(best_d - kGridUpper / kGridPoints, 1e-9);
    double hi = std::min(best_d + kGridUpper / kGridPoints, kGridUpper);

    // Golden-section search on the bracketing interval.
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > kGoldenTol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = f(x1);
        }
    }
    OptimizationResult out;
    out.d_opt = (lo + hi) / 2.0;
    out.f_max = f(out.d_opt);
    ProbeParams at{.alpha = 0.0, .theta = kDefaultTheta, .eta = eta, .p_c = p_c};
    at.alpha = out.d_opt / std::sin(at.theta);
    out.p_s = success_probability(at);
    out.boundary_hit = boundary;
    return out;
}

double gate_phase(double transmission_t, double alpha, double theta) {
    if (!(transmission_t > 0.0 && transmission_t <= 1.0))
        throw ValidationError("transmission T must lie in (0, 1]");
    return transmission_t * (1.0 + transmission_t) * sq(alpha) * sq(theta);
}

double fiber_transmission(double length_km, double loss_db_per_km) {
    if (!(length_km >= 0.0)) throw ValidationError("length must be >= 0");
    if (!(loss_db_per_km >= 0.0)) throw ValidationError("loss must be >= 0");
    return std::pow(10.0, -loss_db_per_km * length_km / 10.0);
}

ProbeParams params_for_distinguishability(double d, double p_c, double eta,
                                          double theta) {
    ProbeParams p{.alpha = d / std::sin(theta), .theta = theta, .eta = eta, .p_c = p_c};
    validate(p);
    return p;
}

}  // namespace rlab::probe
