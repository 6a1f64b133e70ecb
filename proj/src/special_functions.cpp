#include "qscatter/special_functions.hpp"

#include <cmath>
#include <string>

#include "qscatter/errors.hpp"
#include "qscatter/format.hpp"

namespace qscatter {

namespace {

constexpr double kTwoOverSqrtPi = 1.1283791670955126; // 2/sqrt(pi)

void check_finite(double y, const char* fn) {
    if (std::isnan(y))
        throw DomainError(std::string(fn) + ": argument is NaN");
}

void check_ratio_arg(double a, const char* fn) {
    if (!std::isfinite(a) || a < 0.0)
        throw DomainError(std::string(fn) + ": argument must be finite and non-negative (got " +
                          format_double(a) + ")");
}

// ---- Dawson branches (positive argument) --------------------------------

double dawson_series(double y) {
    // D(y) = y - 2y^3/3 + 4y^5/15 - ...; term ratio -2y^2/(2k+3).
    double term = y, sum = y;
    const double y2 = y * y;
    for (int k = 0; k < 40; ++k) {
        term *= -2.0 * y2 / (2.0 * k + 3.0);
        sum += term;
        if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
    }
    return sum;
}

double dawson_rybicki(double y) {
    // Sampled-exponential representation (Rybicki 1989):
    //   D(y) = lim_{h->0} (1/sqrt(pi)) sum_{n odd} exp(-(y - n h)^2) / n.
    // At h = 0.2 the discretization error ~exp(-pi^2/(4h^2)) ~ 1e-27 is far
    // below roundoff; truncating the window at |y - n h| <= 6.6 keeps the
    // dropped tail under exp(-43.5) ~ 1e-19.
    constexpr double h = 0.2;
    constexpr double window = 6.6;
    int nlo = static_cast<int>(std::ceil((y - window) / h));
    int nhi = static_cast<int>(std::floor((y + window) / h));
    if (nlo % 2 == 0) ++nlo;
    double sum = 0.0;
    for (int n = nlo; n <= nhi; n += 2) {
        const double d = y - n * h;
        sum += std::exp(-d * d) / n;
    }
    return sum / std::sqrt(M_PI);
}

double dawson_asymptotic(double y) {
    // D(y) ~ 1/(2y) * [1 + 1/(2y^2) + 3/(4y^4) + ...]; term ratio (2k+1)/(2y^2).
    const double inv2y2 = 1.0 / (2.0 * y * y);
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 60; ++k) {
        const double next = term * (2.0 * k + 1.0) * inv2y2;
        if (next >= std::fabs(term)) break; // past the minimum term: stop
        term = next;
        sum += term;
        if (term < 1e-20 * sum) break;
    }
    return sum / (2.0 * y);
}

// ---- Ratio-function branch helpers --------------------------------------

double erf_ratio_impl(double a, double s, const AccuracyBudget& budget) {
    const double thr = budget.switch_threshold;
    if (s < thr * thr)
        return kTwoOverSqrtPi * (1.0 + s * (-1.0 / 3.0 + s * (1.0 / 10.0 - s / 42.0)));
    return erf(a) / a;
}

double dawson_ratio_impl(double b, double s, const AccuracyBudget& budget) {
    const double thr = budget.switch_threshold;
    if (s < thr * thr)
        return 1.0 + s * (-2.0 / 3.0 + s * (4.0 / 15.0 - s * (8.0 / 105.0)));
    return dawson(b) / b;
}

} // namespace

void AccuracyBudget::validate() const {
    if (!(std::isfinite(erf_abs_tol) && erf_abs_tol > 0.0))
        throw ValidationError("erf_abs_tol must be positive (got " + format_double(erf_abs_tol) + ")");
    if (!(std::isfinite(dawson_abs_tol) && dawson_abs_tol > 0.0))
        throw ValidationError("dawson_abs_tol must be positive (got " +
                              format_double(dawson_abs_tol) + ")");
    // Above ~0.05 the truncated Maclaurin branches would no longer meet the
    // advertised absolute tolerances at the switch point.
    if (!(std::isfinite(switch_threshold) && switch_threshold > 0.0 && switch_threshold <= 0.05))
        throw ValidationError("switch_threshold must lie in (0, 0.05] (got " +
                              format_double(switch_threshold) + ")");
}

double erf(double y) {
    check_finite(y, "erf");
    return std::copysign(std::erf(std::fabs(y)), y);
}

double dawson(double y) {
    check_finite(y, "dawson");
    const double a = std::fabs(y);
    double r;
    if (a < 0.5) r = dawson_series(a);
    else if (a < 7.0) r = dawson_rybicki(a);
    else if (std::isinf(a)) r = 0.0;
    else r = dawson_asymptotic(a);
    return std::copysign(r, y);
}

double erf_ratio(double a, const AccuracyBudget& budget) {
    check_ratio_arg(a, "erf_ratio");
    return erf_ratio_impl(a, a * a, budget);
}

double dawson_ratio(double b, const AccuracyBudget& budget) {
    check_ratio_arg(b, "dawson_ratio");
    return dawson_ratio_impl(b, b * b, budget);
}

double erf_ratio_sq(double s, const AccuracyBudget& budget) {
    check_ratio_arg(s, "erf_ratio_sq");
    return erf_ratio_impl(std::sqrt(s), s, budget);
}

double dawson_ratio_sq(double s, const AccuracyBudget& budget) {
    check_ratio_arg(s, "dawson_ratio_sq");
    return dawson_ratio_impl(std::sqrt(s), s, budget);
}

double erf_ratio_sq_prime(double s, const AccuracyBudget& budget) {
    check_ratio_arg(s, "erf_ratio_sq_prime");
    const double thr2 = budget.switch_threshold * budget.switch_threshold;
    if (s < thr2)
        return kTwoOverSqrtPi * (-1.0 / 3.0 + s * (1.0 / 5.0 + s * (-1.0 / 14.0 + s / 54.0)));
    return (kTwoOverSqrtPi * std::exp(-s) - erf_ratio_sq(s, budget)) / (2.0 * s);
}

double dawson_ratio_sq_prime(double s, const AccuracyBudget& budget) {
    check_ratio_arg(s, "dawson_ratio_sq_prime");
    const double thr2 = budget.switch_threshold * budget.switch_threshold;
    if (s < thr2)
        return -2.0 / 3.0 + s * (8.0 / 15.0 - s * (24.0 / 105.0));
    const double r = dawson_ratio_sq(s, budget);
    return (1.0 - r) / (2.0 * s) - r;
}

} // namespace qscatter
