#include "qscatter/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qscatter/errors.hpp"
#include "qscatter/format.hpp"

namespace qscatter {

std::string_view to_string(Classification c) {
    switch (c) {
        case Classification::Deflection: return "deflection";
        case Classification::Penetration: return "penetration";
        case Classification::Undetermined: return "undetermined";
    }
    throw std::logic_error("unreachable: bad Classification");
}

IntegratorConfig IntegratorConfig::from_scenario(const ScenarioConfig& sc) {
    return {sc.rtol, sc.atol, sc.t_max / 10.0, sc.event_tol};
}

void IntegratorConfig::validate() const {
    auto positive = [](double v, const char* field) {
        if (!(std::isfinite(v) && v > 0.0))
            throw ValidationError(std::string(field) + " must be a positive finite number (got " +
                                  format_double(v) + ")");
    };
    positive(rtol, "rtol");
    positive(atol, "atol");
    positive(max_step, "max_step");
    positive(event_tol, "event_tol");
}

Derivatives rhs(const PhaseState& state, const PhysicalParams& params, ModelKind model) {
    const Gradient g = grad_hamiltonian(state, params, model);
    return {0.5 * g.dh_dp, -0.5 * g.dh_dx};
}

namespace {

// Dormand-Prince 5(4) coefficients (Dormand & Prince 1980) and the dense
// output polynomial of Hairer, Norsett & Wanner's DOPRI5.
constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
// Difference between the 5th-order and embedded 4th-order weights.
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;
// Dense-output weights.
constexpr double kD1 = -12715105075.0 / 11282082432.0;
constexpr double kD3 = 87487479700.0 / 32700410799.0;
constexpr double kD4 = -10690763975.0 / 1880347072.0;
constexpr double kD5 = 701980252875.0 / 199316789632.0;
constexpr double kD6 = -1453857185.0 / 822651844.0;
constexpr double kD7 = 69997945.0 / 29380423.0;

constexpr double kStepFloor = 1e-12;
constexpr double kSafety = 0.9;

struct Vec2 {
    double x, p;
};

// Quartic interpolant over one accepted step, exact at both endpoints.
struct DenseStep {
    double t0, h;
    Vec2 r1, r2, r3, r4, r5;

    Vec2 eval(double theta) const {
        const double th1 = 1.0 - theta;
        return {
            r1.x + theta * (r2.x + th1 * (r3.x + theta * (r4.x + th1 * r5.x))),
            r1.p + theta * (r2.p + th1 * (r3.p + theta * (r4.p + th1 * r5.p))),
        };
    }
};

class Dopri5 {
public:
    Dopri5(const PhysicalParams& params, ModelKind model, const IntegratorConfig& cfg)
        : params_(params), model_(model), cfg_(cfg) {}

    Vec2 eval_rhs(double t, Vec2 y) const {
        const Derivatives d = rhs({y.x, y.p, t}, params_, model_);
        return {d.dx_dt, d.dp_dt};
    }

    // One error-controlled step from (t, y) with f1 = f(t, y) already known
    // (first-same-as-last).  On acceptance carries the new state, its
    // derivative, the dense interpolant, the h actually taken and the
    // controller's proposal for the next step.
    struct StepOutcome {
        Vec2 y_new, f_new;
        DenseStep dense;
        double h_taken;
        double h_suggest;
    };

    StepOutcome step(double t, Vec2 y, Vec2 f1, double h, double t_limit) {
        bool rejected = false;
        for (;;) {
            h = std::min(h, t_limit - t);
            if (h < kStepFloor)
                throw StiffnessError("integrator step collapsed below " +
                                         format_double(kStepFloor) + " at t = " + format_double(t),
                                     t, y.x, y.p);

            auto stage = [&](double c, Vec2 dy) {
                return eval_rhs(t + c * h, {y.x + h * dy.x, y.p + h * dy.p});
            };
            const Vec2 k2 = stage(kC2, {kA21 * f1.x, kA21 * f1.p});
            const Vec2 k3 = stage(kC3, {kA31 * f1.x + kA32 * k2.x, kA31 * f1.p + kA32 * k2.p});
            const Vec2 k4 = stage(kC4, {kA41 * f1.x + kA42 * k2.x + kA43 * k3.x,
                                        kA41 * f1.p + kA42 * k2.p + kA43 * k3.p});
            const Vec2 k5 = stage(kC5, {kA51 * f1.x + kA52 * k2.x + kA53 * k3.x + kA54 * k4.x,
                                        kA51 * f1.p + kA52 * k2.p + kA53 * k3.p + kA54 * k4.p});
            const Vec2 k6 = stage(1.0, {kA61 * f1.x + kA62 * k2.x + kA63 * k3.x + kA64 * k4.x +
                                            kA65 * k5.x,
                                        kA61 * f1.p + kA62 * k2.p + kA63 * k3.p + kA64 * k4.p +
                                            kA65 * k5.p});
            const Vec2 sum5 = {kB1 * f1.x + kB3 * k3.x + kB4 * k4.x + kB5 * k5.x + kB6 * k6.x,
                               kB1 * f1.p + kB3 * k3.p + kB4 * k4.p + kB5 * k5.p + kB6 * k6.p};
            const Vec2 y1 = {y.x + h * sum5.x, y.p + h * sum5.p};
            const Vec2 k7 = eval_rhs(t + h, y1);

            const Vec2 errv = {
                h * (kE1 * f1.x + kE3 * k3.x + kE4 * k4.x + kE5 * k5.x + kE6 * k6.x + kE7 * k7.x),
                h * (kE1 * f1.p + kE3 * k3.p + kE4 * k4.p + kE5 * k5.p + kE6 * k6.p + kE7 * k7.p)};
            const double skx = cfg_.atol + cfg_.rtol * std::max(std::fabs(y.x), std::fabs(y1.x));
            const double skp = cfg_.atol + cfg_.rtol * std::max(std::fabs(y.p), std::fabs(y1.p));
            const double ex = errv.x / skx, ep = errv.p / skp;
            const double err = std::sqrt(0.5 * (ex * ex + ep * ep));

            if (!(err <= 1.0)) { // NaN-safe: a non-finite err rejects the step
                const double fac = std::isfinite(err)
                                       ? std::max(0.2, kSafety * std::pow(err, -0.2))
                                       : 0.1;
                h *= std::min(fac, 1.0);
                rejected = true;
                continue;
            }

            StepOutcome out;
            out.y_new = y1;
            out.f_new = k7;
            out.h_taken = h;
            const double facmax = rejected ? 1.0 : 5.0;
            const double fac = err == 0.0 ? facmax
                                          : std::clamp(kSafety * std::pow(err, -0.2), 0.2, facmax);
            out.h_suggest = std::min(h * fac, cfg_.max_step);

            DenseStep& d = out.dense;
            d.t0 = t;
            d.h = h;
            d.r1 = y;
            d.r2 = {y1.x - y.x, y1.p - y.p};
            d.r3 = {h * f1.x - d.r2.x, h * f1.p - d.r2.p};
            d.r4 = {d.r2.x - h * k7.x - d.r3.x, d.r2.p - h * k7.p - d.r3.p};
            d.r5 = {h * (kD1 * f1.x + kD3 * k3.x + kD4 * k4.x + kD5 * k5.x + kD6 * k6.x +
                         kD7 * k7.x),
                    h * (kD1 * f1.p + kD3 * k3.p + kD4 * k4.p + kD5 * k5.p + kD6 * k6.p +
                         kD7 * k7.p)};
            return out;
        }
    }

    // Hairer's starting-step heuristic (hinit).
    double initial_step(double t0, Vec2 y0, Vec2 f0) const {
        const double skx = cfg_.atol + cfg_.rtol * std::fabs(y0.x);
        const double skp = cfg_.atol + cfg_.rtol * std::fabs(y0.p);
        auto norm = [&](Vec2 v) {
            return std::sqrt(0.5 * ((v.x / skx) * (v.x / skx) + (v.p / skp) * (v.p / skp)));
        };
        const double d0 = norm(y0);
        const double d1 = norm(f0);
        double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, cfg_.max_step);

        // One explicit Euler probe to bound the second derivative.
        const Vec2 f1 = eval_rhs(t0 + h, {y0.x + h * f0.x, y0.p + h * f0.p});
        const double d2 = norm({f1.x - f0.x, f1.p - f0.p}) / h;
        const double dm = std::max(d1, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / dm, 0.2);
        return std::min({100.0 * h, h1, cfg_.max_step});
    }

private:
    const PhysicalParams& params_;
    ModelKind model_;
    const IntegratorConfig& cfg_;
};

// Runs the actual integration, filling traj (whose scenario/params are
// already set).  Factored out so the public wrapper can attach the partial
// trajectory to a propagating GuardError.
void integrate_impl(const ScenarioConfig& scenario, const PhysicalParams& params,
                    const IntegratorConfig& integ, Trajectory& traj) {
    const ModelKind model = scenario.model;
    const double x0 = scenario.x0;
    const double dx_target = x0 / 100.0; // sampling density contract

    Dopri5 solver(params, model, integ);

    Vec2 y{x0, -scenario.p0};
    double t = 0.0;
    Vec2 f = solver.eval_rhs(t, y);

    auto total_energy = [&](double tt, Vec2 yy) {
        return hamiltonian({yy.x, yy.p, tt}, params, model).h_total;
    };

    traj.samples.push_back({0.0, y.x, y.p, total_energy(0.0, y)});
    traj.min_separation = 2.0 * std::fabs(y.x);
    traj.min_alpha_sq = alpha_sq({y.x, y.p, 0.0}, params);

    bool crossed_zero = false;
    bool returned = false;

    auto push_sample = [&](double tt, Vec2 yy) {
        traj.samples.push_back({tt, yy.x, yy.p, total_energy(tt, yy)});
        traj.min_separation = std::min(traj.min_separation, 2.0 * std::fabs(yy.x));
        traj.min_alpha_sq = std::min(traj.min_alpha_sq, alpha_sq({yy.x, yy.p, tt}, params));
    };

    // Walks the dense interpolant of one accepted step, emitting samples no
    // farther than dx_target apart in x and firing the zero-crossing /
    // return events between consecutive samples.  Returns true if the
    // return event ended the trajectory.
    auto process_step = [&](const DenseStep& d) -> bool {
        const double h = d.h;
        // Estimated x travel: endpoint difference, or the velocity bound
        // h*max|p|/m (|p| peaks at an endpoint for these potentials, which
        // are monotone in |x|); 1.5 covers the coherent corrections to dx/dt.
        const Vec2 ya = d.r1;
        const Vec2 yb = d.eval(1.0);
        const double travel = std::max(std::fabs(yb.x - ya.x),
                                       1.5 * h * std::max(std::fabs(ya.p), std::fabs(yb.p)) /
                                           params.mass);
        const long nsub = std::clamp(static_cast<long>(std::ceil(travel / dx_target)), 1L, 500000L);

        double theta_prev = 0.0;
        Vec2 y_prev = ya;

        std::function<bool(double, Vec2, int)> emit = [&](double theta, Vec2 yy, int depth) -> bool {
            // Refine until adjacent samples are closer than dx_target in x.
            if (std::fabs(yy.x - y_prev.x) >= dx_target && depth < 40 &&
                (theta - theta_prev) * h > 1e-12) {
                const double mid = 0.5 * (theta_prev + theta);
                if (emit(mid, d.eval(mid), depth + 1)) return true;
                return emit(theta, yy, depth + 1);
            }

            const double tt = d.t0 + theta * h;
            if (y_prev.x * yy.x < 0.0) crossed_zero = true;

            const double g_prev = std::fabs(y_prev.x) - x0;
            const double g_cur = std::fabs(yy.x) - x0;
            if (g_prev < 0.0 && g_cur >= 0.0) {
                // Return event: |x| back at x0, moving outward.  Localize on
                // the interpolant well below event_tol.
                double lo = theta_prev, hi = theta;
                for (int i = 0; i < 200 && (hi - lo) * h > 1e-3 * integ.event_tol; ++i) {
                    const double mid = 0.5 * (lo + hi);
                    (std::fabs(d.eval(mid).x) - x0 < 0.0 ? lo : hi) = mid;
                }
                const Vec2 ye = d.eval(hi); // the g >= 0 side of the bracket
                const double te = d.t0 + hi * h;
                const Derivatives de = rhs({ye.x, ye.p, te}, params, model);
                if ((ye.x > 0 ? de.dx_dt : -de.dx_dt) > 0.0) {
                    push_sample(te, ye);
                    traj.return_time = te;
                    returned = true;
                    return true;
                }
            }

            push_sample(tt, yy);
            theta_prev = theta;
            y_prev = yy;
            return false;
        };

        for (long j = 1; j <= nsub; ++j) {
            const double theta = static_cast<double>(j) / static_cast<double>(nsub);
            const Vec2 yy = (j == nsub) ? yb : d.eval(theta);
            if (emit(theta, yy, 0)) return true;
        }
        return false;
    };

    double h = solver.initial_step(t, y, f);
    // The loop exits once the remaining horizon is below the step floor, so
    // the final clamped step cannot masquerade as stiffness.
    while (scenario.t_max - t > kStepFloor) {
        const Dopri5::StepOutcome out = solver.step(t, y, f, h, scenario.t_max);
        if (process_step(out.dense)) break;
        const double t_next = t + out.h_taken;
        if (t_next == t)
            throw StiffnessError("integrator time stopped advancing at t = " + format_double(t), t,
                                 y.x, y.p);
        t = t_next;
        y = out.y_new;
        f = out.f_new;
        h = out.h_suggest;
    }

    traj.classification = crossed_zero ? Classification::Penetration
                          : returned   ? Classification::Deflection
                                       : Classification::Undetermined;
}

} // namespace

Trajectory integrate(const ScenarioConfig& scenario, const PhysicalParams& params) {
    return integrate(scenario, params, IntegratorConfig::from_scenario(scenario));
}

Trajectory integrate(const ScenarioConfig& scenario, const PhysicalParams& params,
                     const IntegratorConfig& integ) {
    params.validate();
    scenario.validate();
    integ.validate();

    Trajectory traj;
    traj.scenario = scenario;
    traj.params = params;
    try {
        integrate_impl(scenario, params, integ, traj);
    } catch (const GuardError& e) {
        // Attach everything sampled before the guard region was entered.
        throw GuardRegionError(e.what(), std::move(traj));
    }
    return traj;
}

ReturnAnalysis classify_and_return(const Trajectory& traj, double x0) {
    ReturnAnalysis res;
    const auto& s = traj.samples;
    bool crossed = false;

    for (size_t i = 0; i + 1 < s.size() && !res.return_time; ++i) {
        if (s[i].x * s[i + 1].x < 0.0) crossed = true;

        const double g0 = std::fabs(s[i].x) - x0;
        const double g1 = std::fabs(s[i + 1].x) - x0;
        if (!(g0 < 0.0 && g1 >= 0.0)) continue;

        // Cubic Hermite interpolant of x(t) over the bracketing pair.
        const double ta = s[i].t, tb = s[i + 1].t, dt = tb - ta;
        const double xa = s[i].x, xb = s[i + 1].x;
        const double va = rhs({s[i].x, s[i].p, ta}, traj.params, traj.scenario.model).dx_dt;
        const double vb = rhs({s[i + 1].x, s[i + 1].p, tb}, traj.params, traj.scenario.model).dx_dt;
        const double vout = (xb > 0) ? vb : -vb;
        if (!(vout > 0.0)) continue; // not moving outward: tangency, keep scanning

        auto hermite_x = [&](double u) { // u in [0, 1]
            const double u2 = u * u, u3 = u2 * u;
            return (2 * u3 - 3 * u2 + 1) * xa + (u3 - 2 * u2 + u) * dt * va +
                   (-2 * u3 + 3 * u2) * xb + (u3 - u2) * dt * vb;
        };
        double lo = 0.0, hi = 1.0;
        for (int k = 0; k < 200 && (hi - lo) * dt > 1e-3 * traj.scenario.event_tol; ++k) {
            const double mid = 0.5 * (lo + hi);
            (std::fabs(hermite_x(mid)) - x0 < 0.0 ? lo : hi) = mid;
        }
        res.return_time = ta + 0.5 * (lo + hi) * dt;
    }
    // Crossings are scanned over the whole sample list even though sampling
    // normally ends at the return event: trajectories built by other means
    // may extend past it.
    for (size_t i = 0; i + 1 < s.size() && !crossed; ++i)
        if (s[i].x * s[i + 1].x < 0.0) crossed = true;

    if (res.return_time) {
        const double t_free = 2.0 * traj.params.mass * x0 / traj.scenario.p0;
        res.delay = *res.return_time - t_free;
    }
    res.classification = crossed            ? Classification::Penetration
                         : res.return_time ? Classification::Deflection
                                           : Classification::Undetermined;
    return res;
}

double classical_return_time(double x0, double p0, const PhysicalParams& params) {
    params.validate();
    if (!(std::isfinite(x0) && x0 > 0.0))
        throw ValidationError("x0 must be a positive finite number (got " + format_double(x0) + ")");
    if (!(std::isfinite(p0) && p0 > 0.0))
        throw ValidationError("p0 must be a positive finite number (got " + format_double(p0) + ")");

    const double m = params.mass;
    if (params.e0sq == 0.0) return 2.0 * m * x0 / p0;

    const double energy = p0 * p0 / m + params.e0sq / (2.0 * x0);
    const double x_min = params.e0sq / (2.0 * energy);
    const double u_max = std::sqrt(x0 - x_min);
    auto f = [&](double u) { return std::sqrt(x_min + u * u); };
    const double integral =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, u_max, 12, 1e-13);
    return 4.0 * std::sqrt(m / energy) * integral;
}

} // namespace qscatter
