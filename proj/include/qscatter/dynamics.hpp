#ifndef QSCATTER_DYNAMICS_HPP
#define QSCATTER_DYNAMICS_HPP

#include <optional>
#include <vector>

#include "qscatter/energy.hpp"
#include "qscatter/errors.hpp"
#include "qscatter/params.hpp"

namespace qscatter {

// Outcome of a head-on run: the packet pair either turned around before
// the centers met (deflection), the relative coordinate crossed zero
// (penetration), or neither happened within the horizon.
enum class Classification {
    Deflection,
    Penetration,
    Undetermined,
};

std::string_view to_string(Classification c);

struct TrajectorySample {
    double t;
    double x;
    double p;
    double h_total;
};

// Integrated trajectory plus the observables read off it.  The config
// snapshot records exactly what produced the samples.
struct Trajectory {
    std::vector<TrajectorySample> samples;
    Classification classification = Classification::Undetermined;
    std::optional<double> return_time; // first time |x| re-reaches x0 moving outward
    double min_separation = 0.0;       // min over samples of the separation 2|x|
    double min_alpha_sq = 0.0;         // min over samples of |alpha|^2
    ScenarioConfig scenario;
    PhysicalParams params;
};

struct IntegratorConfig {
    double rtol;
    double atol;
    double max_step;
    double event_tol;

    static IntegratorConfig from_scenario(const ScenarioConfig& sc);
    void validate() const;
};

struct Derivatives {
    double dx_dt;
    double dp_dt;
};

// GuardError rethrown by integrate() with the samples accumulated before
// the guard region was entered, so callers can see how the run got there.
class GuardRegionError : public GuardError {
public:
    GuardRegionError(const std::string& msg, Trajectory partial)
        : GuardError(msg), trajectory(std::move(partial)) {}
    Trajectory trajectory;
};

// Hamilton's equations for the relative coordinate.  The packets carry the
// full Hamiltonian in both degrees of freedom, so each equation gets a
// factor 1/2:  dx/dt = (1/2) dH/dp,  dp/dt = -(1/2) dH/dx.
Derivatives rhs(const PhaseState& state, const PhysicalParams& params, ModelKind model);

// Integrate from (x0, -p0) at t = 0 until a return event, a zero crossing
// of x, or t_max.  Adaptive Dormand-Prince 5(4); samples are placed densely
// enough that adjacent x values differ by less than x0/100.  Throws
// StiffnessError if the controller drives the step below its floor, and
// propagates the energy-model errors (GuardError etc.).
Trajectory integrate(const ScenarioConfig& scenario, const PhysicalParams& params,
                     const IntegratorConfig& integ);
Trajectory integrate(const ScenarioConfig& scenario, const PhysicalParams& params);

struct ReturnAnalysis {
    Classification classification = Classification::Undetermined;
    std::optional<double> return_time;
    std::optional<double> delay; // return_time minus the free-motion value 2 m x0 / p0
};

// Read the classification and return-time observables off an already
// integrated trajectory: scans samples for a zero crossing and for the
// first outward re-crossing of |x| = x0, then polishes the crossing time
// on a cubic Hermite interpolant of the bracketing samples.
ReturnAnalysis classify_and_return(const Trajectory& traj, double x0);
inline ReturnAnalysis classify_and_return(const Trajectory& traj) {
    return classify_and_return(traj, traj.scenario.x0);
}

// Return time of the classical point particle from the energy integral
//   t = 2 sqrt(m) * Int dx / sqrt(E - e0^2/(2x))
// evaluated by Gauss-Kronrod quadrature after substituting x = x_min + u^2
// (which removes the inverse-square-root turning-point singularity).
// Falls back to the free value 2 m x0 / p0 when e0sq is zero.
double classical_return_time(double x0, double p0, const PhysicalParams& params);

} // namespace qscatter

#endif
