#include "qscatter/sweep.hpp"

#include <cmath>

#include "qscatter/errors.hpp"
#include "qscatter/format.hpp"

namespace qscatter {

std::vector<double> default_momentum_grid(double sigma) {
    constexpr int kCount = 60;
    constexpr double kLo = 0.05, kHi = 3.0;
    std::vector<double> grid(kCount);
    const double log_lo = std::log(kLo), log_hi = std::log(kHi);
    for (int i = 0; i < kCount; ++i)
        grid[i] = sigma * std::exp(log_lo + (log_hi - log_lo) * i / (kCount - 1));
    return grid;
}

namespace {

SweepRow sweep_point(double p0, const ScenarioConfig& scenario, const PhysicalParams& params) {
    SweepRow row;
    row.p0 = p0;
    row.p0_over_sigma = p0 / params.sigma;
    row.t_ret_free = 2.0 * params.mass * scenario.x0 / p0;
    try {
        ScenarioConfig sc = scenario;
        sc.p0 = p0;
        const Trajectory traj = integrate(sc, params);
        row.classification = traj.classification;
        row.t_ret_coherent = traj.return_time;
        row.t_ret_classical = classical_return_time(scenario.x0, p0, params);
    } catch (const Error& e) {
        row.error = e.what();
    }
    return row;
}

} // namespace

SweepResult sweep_return_time(const std::vector<double>& momenta, const ScenarioConfig& scenario,
                              const PhysicalParams& params, bool parallel) {
    params.validate();
    scenario.validate();

    SweepResult result;
    result.scenario = scenario;
    result.params = params;
    result.rows.resize(momenta.size());

    const long n = static_cast<long>(momenta.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < n; ++i)
            result.rows[i] = sweep_point(momenta[i], scenario, params);
    } else {
        for (long i = 0; i < n; ++i)
            result.rows[i] = sweep_point(momenta[i], scenario, params);
    }
    return result;
}

std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 1) throw ValidationError("grid count must be at least 1 (got " +
                                         std::to_string(count) + ")");
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo <= hi))
        throw ValidationError("grid bounds must be finite with lo <= hi (got [" +
                              format_double(lo) + ", " + format_double(hi) + "])");
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < count; ++i)
        v[i] = lo + (hi - lo) * i / (count - 1);
    return v;
}

EnergyGridResult tabulate_energy(const std::vector<double>& xs, const std::vector<double>& ps,
                                 const PhysicalParams& params, ModelKind model, bool parallel) {
    params.validate();

    EnergyGridResult result;
    result.xs = xs;
    result.ps = ps;
    result.model = model;
    result.params = params;
    result.rows.resize(xs.size() * ps.size());

    const long nx = static_cast<long>(xs.size());
    const long np = static_cast<long>(ps.size());
    auto point = [&](long idx) {
        EnergyGridRow row;
        row.x = xs[idx / np];
        row.p = ps[idx % np];
        try {
            row.energy = hamiltonian({row.x, row.p, 0.0}, params, model);
        } catch (const Error& e) {
            row.error = e.what();
        }
        return row;
    };

    const long n = nx * np;
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i)
            result.rows[i] = point(i);
    } else {
        for (long i = 0; i < n; ++i)
            result.rows[i] = point(i);
    }
    return result;
}

CriticalMomentum find_critical_momentum(double p_lo, double p_hi, const ScenarioConfig& scenario,
                                        const PhysicalParams& params, double tolerance) {
    params.validate();
    if (!(std::isfinite(p_lo) && std::isfinite(p_hi) && 0.0 < p_lo && p_lo < p_hi))
        throw ValidationError("critical-momentum bracket must satisfy 0 < p_lo < p_hi (got [" +
                              format_double(p_lo) + ", " + format_double(p_hi) + "])");
    if (!(std::isfinite(tolerance) && tolerance > 0.0))
        throw ValidationError("tolerance must be a positive finite number (got " +
                              format_double(tolerance) + ")");

    auto classify = [&](double p0) {
        ScenarioConfig sc = scenario;
        sc.p0 = p0;
        const Classification c = integrate(sc, params).classification;
        if (c == Classification::Undetermined)
            throw BracketError("trajectory at p0 = " + format_double(p0) +
                               " produced no event within t_max = " +
                               format_double(scenario.t_max));
        return c;
    };

    if (classify(p_lo) != Classification::Deflection)
        throw BracketError("lower bracket end p0 = " + format_double(p_lo) +
                           " does not deflect; bracket does not straddle the transition");
    if (classify(p_hi) != Classification::Penetration)
        throw BracketError("upper bracket end p0 = " + format_double(p_hi) +
                           " does not penetrate; bracket does not straddle the transition");

    CriticalMomentum out{0.0, p_lo, p_hi, 0, tolerance};
    while (out.p_hi - out.p_lo > tolerance) {
        const double mid = 0.5 * (out.p_lo + out.p_hi);
        if (classify(mid) == Classification::Deflection)
            out.p_lo = mid;
        else
            out.p_hi = mid;
        ++out.iterations;
    }
    out.p_cr = 0.5 * (out.p_lo + out.p_hi);
    return out;
}

} // namespace qscatter
