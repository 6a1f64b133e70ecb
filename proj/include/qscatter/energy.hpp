#ifndef QSCATTER_ENERGY_HPP
#define QSCATTER_ENERGY_HPP

#include "qscatter/params.hpp"
#include "qscatter/special_functions.hpp"

namespace qscatter {

// Relative coordinate x (half-separation) and momentum p of the two-packet
// system at time t.  t only matters to the spreading model.
struct PhaseState {
    double x = 0.0;
    double p = 0.0;
    double t = 0.0;
};

// Expectation value of the energy split into its physically distinct
// pieces.  h_total is the sum of whichever pieces the model keeps.
struct EnergyBreakdown {
    double t_cl;    // classical kinetic p^2/m
    double t_conf;  // confinement energy 3 sigma^2/m (coherent models only)
    double t_corr;  // exchange correlation term (coherent models only)
    double v;       // interaction energy
    double h_total;
};

// Scaled arguments fed to the ratio functions when assembling the Coulomb
// expectation: spread is the width growth factor sqrt(1 + (omega t)^2)
// (identically 1 in the frozen model), a_arg = 2 sigma |x| / (hbar spread)
// the position-like argument and b_arg = sigma |L| / (hbar spread) the
// momentum-like one, with L = (hbar/sigma^2) p - 2 x omega t (plain
// (hbar/sigma^2) p when frozen).
struct CoulombArguments {
    double spread; // >= 1
    double a_arg;  // >= 0
    double b_arg;  // >= 0
};

struct Gradient {
    double dh_dx;
    double dh_dp;
};

struct KineticTerms {
    double t_cl;
    double t_conf;
    double t_corr;
};

// States with |alpha|^2 below this are rejected (GuardError): the shared
// normalization 1 - exp(-4|alpha|^2) of the correlated expectation values
// degenerates to 0/0 as the packet pair approaches the null state.  The
// value leaves ample headroom for the trajectories the critical-momentum
// bisection must classify, whose closest approach scales linearly with the
// distance to the critical momentum.
inline constexpr double kAlphaSqGuard = 1e-9;

// |alpha|^2 = sigma^2 x^2 / hbar^2 + p^2 / (4 sigma^2): squared magnitude
// of the coherent-state label attached to (x, p).
double alpha_sq(const PhaseState& state, const PhysicalParams& params);

// |<alpha|-alpha>|^2 = exp(-4 |alpha|^2): overlap of the packet pair with
// its parity image.  Throws DomainError for negative a2.
double overlap_sq(double a2);

// Kinetic expectation of the coherent pair, split as
//   t_cl  = p^2/m
//   t_conf = 3 sigma^2/m
//   t_corr = (4 sigma^2/m) * g(|alpha|^2),  g(a) = a / (e^{4a} - 1),
// with g evaluated by series below a = 1e-3, flushed to 0 above a = 100.
KineticTerms kinetic_breakdown(const PhaseState& state, const PhysicalParams& params);

// The ratio-function arguments for the model's Coulomb expectation.
CoulombArguments coulomb_arguments(const PhaseState& state, const PhysicalParams& params,
                                   ModelKind model);

// Interaction energy <V>.  Throws SingularityError (classical at x = 0),
// GuardError (coherent models inside the |alpha|^2 guard), RangeError
// (spreading model if the exchange exponent would overflow).
double coulomb_expectation(const PhaseState& state, const PhysicalParams& params,
                           ModelKind model);

// Full energy at a phase-space point under the given model.
EnergyBreakdown hamiltonian(const PhaseState& state, const PhysicalParams& params,
                            ModelKind model);

// Analytic (dH/dx, dH/dp) of h_total at fixed t.  Same error behaviour as
// hamiltonian().
Gradient grad_hamiltonian(const PhaseState& state, const PhysicalParams& params,
                          ModelKind model);

} // namespace qscatter

#endif
