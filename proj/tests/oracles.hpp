#ifndef QSCATTER_TEST_ORACLES_HPP
#define QSCATTER_TEST_ORACLES_HPP

#include "qscatter/energy.hpp"
#include "qscatter/params.hpp"

// Reference implementations used only by tests.  They deliberately share
// no code path with the library: erf and the Dawson integral are evaluated
// by adaptive Gauss-Kronrod quadrature of their defining integrals, the
// classical return time by an antiderivative, gradients by high-order
// finite differences.
namespace oracle {

// erf(y) by quadrature of (2/sqrt(pi)) exp(-t^2).
double erf(double y);

// D(y) by quadrature of exp(u^2 - 2|y|u) over [0, L]: the substitution
// u = |y| - t maps exp(-y^2) Int_0^y exp(t^2) dt onto an integrand bounded
// by 1, and truncating at L = y - sqrt(y^2 - 50) keeps the dropped tail
// under exp(-50).  Valid for every finite y.
double dawson(double y);

// Classical return time from the closed-form antiderivative of the energy
// integral: Int sqrt(a^2 + u^2) du = [u sqrt(a^2+u^2) + a^2 asinh(u/a)]/2.
double classical_return_time(double x0, double p0, double mass, double e0sq);

struct FdGradient {
    double dh_dx;
    double dh_dp;
};

// 5-point central differences of h_total at fixed t.
FdGradient grad_hamiltonian_fd(const qscatter::PhaseState& state,
                               const qscatter::PhysicalParams& params, qscatter::ModelKind model,
                               double step);

} // namespace oracle

#endif
