#include "qscatter/energy.hpp"

#include <cmath>

#include "qscatter/errors.hpp"
#include "qscatter/format.hpp"

namespace qscatter {

namespace {

constexpr double kTwoOverSqrtPi = 1.1283791670955126;

// g(a) = a / (e^{4a} - 1), the correlation weight.  Series below 1e-3
// (Bernoulli expansion, next term a^6/29.5), flushed to zero above 100
// where it is ~1e-172, mid-range via expm1 so the a -> 0 limit 1/4 is
// approached without cancellation.
double corr_weight(double a) {
    if (a < 1e-3)
        return 0.25 - a * 0.5 + a * a / 3.0 - 4.0 * a * a * a * a / 45.0;
    if (a > 100.0) return 0.0;
    return a * std::exp(-4.0 * a) / (-std::expm1(-4.0 * a));
}

// g'(a) = e^{-4a} [(1 - e^{-4a}) - 4a] / (1 - e^{-4a})^2.
double corr_weight_prime(double a) {
    if (a < 1e-3)
        return -0.5 + 2.0 * a / 3.0 - 16.0 * a * a * a / 45.0;
    if (a > 100.0) return 0.0;
    const double e = std::exp(-4.0 * a);
    const double w = -std::expm1(-4.0 * a);
    return e * (w - 4.0 * a) / (w * w);
}

void check_coherent_guard(double a2) {
    if (a2 < kAlphaSqGuard)
        throw GuardError("coherent state too close to the null pair: |alpha|^2 = " +
                         format_double(a2) + " < " + format_double(kAlphaSqGuard));
}

// Everything the coherent Coulomb expectation and its gradient share:
// squared ratio-function arguments, the exchange exponent and the
// normalization.  Arguments are kept squared throughout so evenness in the
// phase-space variables is exact and nothing kinks at x = 0 or p = 0.
struct CoulombCore {
    double spread;  // width growth factor
    double s_a;     // squared erf-ratio argument
    double s_b;     // squared dawson-ratio argument
    double expo;    // exchange exponent, always <= 0
    double a2;      // |alpha|^2
    double w;       // normalization 1 - exp(-4 a2)
};

CoulombCore coulomb_core(const PhaseState& st, const PhysicalParams& pp, ModelKind model) {
    CoulombCore c;
    c.a2 = alpha_sq(st, pp);
    check_coherent_guard(c.a2);
    c.w = -std::expm1(-4.0 * c.a2);
    const double so_h = pp.sigma / pp.hbar; // sigma/hbar shows up everywhere
    if (model == ModelKind::CoherentFrozen) {
        c.spread = 1.0;
        c.s_a = 4.0 * so_h * so_h * st.x * st.x;
        c.s_b = st.p * st.p / (pp.sigma * pp.sigma);
        // s_b - 4 a2 collapses to -s_a identically; using the collapsed form
        // avoids subtracting two large near-equal numbers at high momentum.
        c.expo = -c.s_a;
    } else {
        const double wt = pp.omega() * st.t;
        const double s2 = 1.0 + wt * wt;
        c.spread = std::sqrt(s2);
        c.s_a = 4.0 * so_h * so_h * st.x * st.x / s2;
        const double l = (pp.hbar / (pp.sigma * pp.sigma)) * st.p - 2.0 * st.x * wt;
        c.s_b = so_h * so_h * l * l / s2;
        c.expo = c.s_b - 4.0 * c.a2;
        if (c.expo > 700.0)
            throw RangeError("exchange exponent overflow: " + format_double(c.expo));
    }
    return c;
}

double coulomb_value(const CoulombCore& c, const PhysicalParams& pp) {
    const double u = erf_ratio_sq(c.s_a) -
                     kTwoOverSqrtPi * dawson_ratio_sq(c.s_b) * std::exp(c.expo);
    return pp.e0sq * pp.sigma / (pp.hbar * c.spread) * u / c.w;
}

} // namespace

double alpha_sq(const PhaseState& state, const PhysicalParams& params) {
    const double xs = params.sigma * state.x / params.hbar;
    const double ps = state.p / (2.0 * params.sigma);
    return xs * xs + ps * ps;
}

double overlap_sq(double a2) {
    if (!(a2 >= 0.0))
        throw DomainError("overlap_sq: |alpha|^2 must be non-negative (got " + format_double(a2) +
                          ")");
    return std::exp(-4.0 * a2);
}

KineticTerms kinetic_breakdown(const PhaseState& state, const PhysicalParams& params) {
    KineticTerms k;
    k.t_cl = state.p * state.p / params.mass;
    k.t_conf = 3.0 * params.sigma * params.sigma / params.mass;
    k.t_corr = 4.0 * params.sigma * params.sigma / params.mass * corr_weight(alpha_sq(state, params));
    return k;
}

CoulombArguments coulomb_arguments(const PhaseState& state, const PhysicalParams& params,
                                   ModelKind model) {
    switch (model) {
        case ModelKind::CoherentFrozen:
        case ModelKind::CoherentSpreading: {
            const CoulombCore c = coulomb_core(state, params, model);
            return {c.spread, std::sqrt(c.s_a), std::sqrt(c.s_b)};
        }
        case ModelKind::ClassicalCoulomb:
        case ModelKind::Free:
            return {1.0, 0.0, 0.0};
    }
    throw std::logic_error("unreachable: bad ModelKind");
}

double coulomb_expectation(const PhaseState& state, const PhysicalParams& params,
                           ModelKind model) {
    switch (model) {
        case ModelKind::Free:
            return 0.0;
        case ModelKind::ClassicalCoulomb:
            if (state.x == 0.0)
                throw SingularityError("classical Coulomb energy diverges at zero separation");
            return params.e0sq / (2.0 * std::fabs(state.x));
        case ModelKind::CoherentFrozen:
        case ModelKind::CoherentSpreading:
            return coulomb_value(coulomb_core(state, params, model), params);
    }
    throw std::logic_error("unreachable: bad ModelKind");
}

EnergyBreakdown hamiltonian(const PhaseState& state, const PhysicalParams& params,
                            ModelKind model) {
    EnergyBreakdown e{};
    e.t_cl = state.p * state.p / params.mass;
    e.v = coulomb_expectation(state, params, model);
    if (model == ModelKind::CoherentFrozen || model == ModelKind::CoherentSpreading) {
        const KineticTerms k = kinetic_breakdown(state, params);
        e.t_conf = k.t_conf;
        e.t_corr = k.t_corr;
    }
    e.h_total = e.t_cl + e.t_conf + e.t_corr + e.v;
    return e;
}

Gradient grad_hamiltonian(const PhaseState& state, const PhysicalParams& params,
                          ModelKind model) {
    const double two_p_over_m = 2.0 * state.p / params.mass;
    switch (model) {
        case ModelKind::Free:
            return {0.0, two_p_over_m};
        case ModelKind::ClassicalCoulomb: {
            if (state.x == 0.0)
                throw SingularityError("classical Coulomb force diverges at zero separation");
            const double ax = std::fabs(state.x);
            return {-params.e0sq * state.x / (2.0 * ax * ax * ax), two_p_over_m};
        }
        case ModelKind::CoherentFrozen:
        case ModelKind::CoherentSpreading:
            break;
    }

    const PhysicalParams& pp = params;
    const CoulombCore c = coulomb_core(state, pp, model);

    // Chain-rule pieces d(squared argument)/d(x or p).
    const double so_h = pp.sigma / pp.hbar;
    double dsa_dx, dsa_dp, dsb_dx, dsb_dp, dexpo_dx, dexpo_dp;
    const double d4a2_dx = 8.0 * so_h * so_h * state.x;
    const double d4a2_dp = 2.0 * state.p / (pp.sigma * pp.sigma);
    if (model == ModelKind::CoherentFrozen) {
        dsa_dx = d4a2_dx;
        dsa_dp = 0.0;
        dsb_dx = 0.0;
        dsb_dp = d4a2_dp;
        dexpo_dx = -dsa_dx; // expo = -s_a
        dexpo_dp = 0.0;
    } else {
        const double wt = pp.omega() * state.t;
        const double s2 = 1.0 + wt * wt;
        dsa_dx = 8.0 * so_h * so_h * state.x / s2;
        dsa_dp = 0.0;
        const double l = (pp.hbar / (pp.sigma * pp.sigma)) * state.p - 2.0 * state.x * wt;
        const double dl_dx = -2.0 * wt;
        const double dl_dp = pp.hbar / (pp.sigma * pp.sigma);
        const double pref = 2.0 * so_h * so_h * l / s2;
        dsb_dx = pref * dl_dx;
        dsb_dp = pref * dl_dp;
        dexpo_dx = dsb_dx - d4a2_dx;
        dexpo_dp = dsb_dp - d4a2_dp;
    }

    const double er = erf_ratio_sq(c.s_a);
    const double erp = erf_ratio_sq_prime(c.s_a);
    const double dr = dawson_ratio_sq(c.s_b);
    const double drp = dawson_ratio_sq_prime(c.s_b);
    const double ex = std::exp(c.expo);
    const double u = er - kTwoOverSqrtPi * dr * ex;
    const double du_dx = erp * dsa_dx - kTwoOverSqrtPi * ex * (drp * dsb_dx + dr * dexpo_dx);
    const double du_dp = erp * dsa_dp - kTwoOverSqrtPi * ex * (drp * dsb_dp + dr * dexpo_dp);

    const double e4 = overlap_sq(c.a2); // dW/dxi = e4 * d(4 a2)/dxi
    const double dw_dx = e4 * d4a2_dx;
    const double dw_dp = e4 * d4a2_dp;

    const double pref = pp.e0sq * pp.sigma / (pp.hbar * c.spread);
    const double dv_dx = pref * (du_dx * c.w - u * dw_dx) / (c.w * c.w);
    const double dv_dp = pref * (du_dp * c.w - u * dw_dp) / (c.w * c.w);

    const double gp = corr_weight_prime(c.a2) * 4.0 * pp.sigma * pp.sigma / pp.mass;
    const double da2_dx = 0.25 * d4a2_dx;
    const double da2_dp = 0.25 * d4a2_dp;

    return {gp * da2_dx + dv_dx, two_p_over_m + gp * da2_dp + dv_dp};
}

} // namespace qscatter
