#ifndef QSCATTER_SWEEP_HPP
#define QSCATTER_SWEEP_HPP

#include <optional>
#include <string>
#include <vector>

#include "qscatter/dynamics.hpp"
#include "qscatter/params.hpp"

namespace qscatter {

// One momentum grid point of the return-time sweep.  The coherent value
// comes from the ODE, the classical one from the quadrature observable,
// the free one from 2 m x0 / p0.  A point whose integration failed keeps
// its error message here and renders as an error marker in the CSV.
struct SweepRow {
    double p0 = 0.0;
    double p0_over_sigma = 0.0;
    std::optional<double> t_ret_coherent;
    std::optional<double> t_ret_classical;
    double t_ret_free = 0.0;
    Classification classification = Classification::Undetermined;
    std::string error; // empty on success
};

struct SweepResult {
    std::vector<SweepRow> rows;
    ScenarioConfig scenario; // template: p0 is overridden per row
    PhysicalParams params;
};

// Default grid: 60 momenta, log-spaced in p0/sigma over [0.05, 3].
std::vector<double> default_momentum_grid(double sigma);

// Return-time observables over a momentum grid.  Points are independent;
// with parallel = true they are distributed over OpenMP threads.  Results
// are written into per-index slots, so serial and parallel runs produce
// identical rows (and therefore byte-identical CSV files).
SweepResult sweep_return_time(const std::vector<double>& momenta, const ScenarioConfig& scenario,
                              const PhysicalParams& params, bool parallel = true);

// One point of the energy-surface tabulation.  Points where the model
// rejects the state (classical singularity at x = 0, coherent guard region)
// carry the error message instead of a breakdown.
struct EnergyGridRow {
    double x = 0.0;
    double p = 0.0;
    std::optional<EnergyBreakdown> energy;
    std::string error; // empty on success
};

struct EnergyGridResult {
    std::vector<EnergyGridRow> rows; // x-major order
    std::vector<double> xs;
    std::vector<double> ps;
    ModelKind model = ModelKind::CoherentFrozen;
    PhysicalParams params;
};

// Evenly spaced grid helper for the energy tabulation.
std::vector<double> linspace(double lo, double hi, int count);

// Tabulate the energy breakdown over the outer product xs x ps at t = 0.
// Independent points, same determinism contract as sweep_return_time.
EnergyGridResult tabulate_energy(const std::vector<double>& xs, const std::vector<double>& ps,
                                 const PhysicalParams& params, ModelKind model,
                                 bool parallel = true);

struct CriticalMomentum {
    double p_cr;       // bracket midpoint after convergence
    double p_lo;       // deflection side of the final bracket
    double p_hi;       // penetration side of the final bracket
    int iterations;
    double tolerance;
};

// Locate the deflection/penetration transition by bisection on the
// classification of integrated trajectories.  Both bracket ends are
// verified first: p_lo must deflect and p_hi must penetrate, anything else
// throws BracketError.  An Undetermined probe (no event within t_max) also
// throws, naming the momentum that failed to classify.
CriticalMomentum find_critical_momentum(double p_lo, double p_hi, const ScenarioConfig& scenario,
                                        const PhysicalParams& params, double tolerance);

} // namespace qscatter

#endif
