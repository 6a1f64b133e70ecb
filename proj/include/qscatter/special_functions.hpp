#ifndef QSCATTER_SPECIAL_FUNCTIONS_HPP
#define QSCATTER_SPECIAL_FUNCTIONS_HPP

namespace qscatter {

// Tolerances the special-function layer promises, plus the argument below
// which the ratio functions switch from direct quotients to Maclaurin
// series.  The defaults are what the energy and dynamics layers assume.
struct AccuracyBudget {
    double erf_abs_tol = 1e-12;
    double dawson_abs_tol = 1e-10;
    double switch_threshold = 1e-2;

    void validate() const; // throws ValidationError
};

// Error function.  Odd bit-for-bit: erf(-y) == -erf(y).
// Throws DomainError on NaN.
double erf(double y);

// Dawson integral D(y) = exp(-y^2) * integral_0^y exp(t^2) dt.
// Maclaurin series for |y| < 0.5, Rybicki's sampled-exponential method
// (h = 0.2) for 0.5 <= |y| < 7, asymptotic series in 1/y beyond.
// Odd bit-for-bit.  Throws DomainError on NaN.
double dawson(double y);

// erf(a)/a and D(b)/b, continuous through the removable singularity at 0;
// defined for non-negative arguments only (both are even, and callers feed
// them magnitudes).  Below the switch threshold they use series so the
// limit values 2/sqrt(pi) and 1 are reproduced smoothly.
double erf_ratio(double a, const AccuracyBudget& budget = {});
double dawson_ratio(double b, const AccuracyBudget& budget = {});

// The same ratios as smooth functions of the *squared* argument s = a^2,
// together with d/ds derivatives.  The energy gradients are assembled from
// these: expressing everything in s = (scaled x)^2 or (scaled p)^2 keeps
// the Hamiltonian manifestly even and its derivatives finite at the origin.
double erf_ratio_sq(double s, const AccuracyBudget& budget = {});
double erf_ratio_sq_prime(double s, const AccuracyBudget& budget = {});
double dawson_ratio_sq(double s, const AccuracyBudget& budget = {});
double dawson_ratio_sq_prime(double s, const AccuracyBudget& budget = {});

} // namespace qscatter

#endif
