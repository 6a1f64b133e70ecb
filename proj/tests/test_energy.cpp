#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "qscatter/energy.hpp"
#include "qscatter/errors.hpp"

using namespace qscatter;

namespace {

const PhysicalParams kUnit{}; // sigma = mass = hbar = e0sq = 1

constexpr ModelKind kAllModels[] = {ModelKind::CoherentFrozen, ModelKind::CoherentSpreading,
                                    ModelKind::ClassicalCoulomb, ModelKind::Free};

bool rel_close(double a, double b, double tol) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    return std::fabs(a - b) / scale < tol;
}

} // namespace

TEST_CASE("alpha_sq and overlap_sq on reference states") {
    CHECK(alpha_sq({2.5, 1.0}, kUnit) == 6.5);
    CHECK(alpha_sq({0.0, 0.0}, kUnit) == 0.0);
    PhysicalParams p;
    p.sigma = 1.7;
    CHECK(alpha_sq({0.0, 2.0 * p.sigma}, p) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK(overlap_sq(0.0) == 1.0);
    CHECK(overlap_sq(6.5) == doctest::Approx(5.109089028063325e-12).epsilon(1e-12));
    CHECK(overlap_sq(200.0) == 0.0);
    CHECK_THROWS_AS(overlap_sq(-1e-3), DomainError);
}

TEST_CASE("kinetic breakdown at the reference release point") {
    const KineticTerms k = kinetic_breakdown({2.5, 1.0}, kUnit);
    CHECK(k.t_cl == 1.0);
    CHECK(k.t_conf == 3.0);
    CHECK(k.t_corr == doctest::Approx(1.3283631473032514e-10).epsilon(1e-9));
}

TEST_CASE("correlation term: null-state limit, flush, and series seam") {
    // g(a) -> 1/4 as a -> 0, so t_corr -> sigma^2/m.
    const KineticTerms near_null = kinetic_breakdown({0.0, 1e-8}, kUnit);
    CHECK(near_null.t_corr == doctest::Approx(1.0).epsilon(1e-8));

    // Flushed to zero once exp(-4a) cannot influence the sum.
    const KineticTerms far = kinetic_breakdown({11.0, 0.0}, kUnit);
    CHECK(far.t_corr == 0.0);

    // Continuity across the series/direct switch at a = 1e-3: states with
    // |alpha|^2 straddling it via p = 2 sqrt(a).  The probes sit a few ulps
    // apart so the check sees the branch jump, not the slope.
    const double a = 1e-3;
    const auto t_corr_at = [&](double a2) {
        return kinetic_breakdown({0.0, 2.0 * std::sqrt(a2)}, kUnit).t_corr;
    };
    CHECK(std::fabs(t_corr_at(a * (1.0 - 1e-12)) - t_corr_at(a * (1.0 + 1e-12))) < 1e-13);
}

TEST_CASE("correlation term equals the raw overlap expression away from the null state") {
    // t_corr = (4 sigma^2/m) a2 N2/(1 - N2) with N2 = overlap_sq(a2); the
    // guarded evaluation must agree with this textbook form wherever the
    // latter is well conditioned.
    for (double a2 = 0.01; a2 <= 5.0; a2 += 0.07) {
        const double n2 = overlap_sq(a2);
        const double raw = 4.0 * a2 * n2 / (1.0 - n2);
        const double got = kinetic_breakdown({0.0, 2.0 * std::sqrt(a2)}, kUnit).t_corr;
        CHECK(rel_close(got, raw, 1e-12));
    }
}

TEST_CASE("coulomb arguments per model") {
    const PhaseState s{2.5, 1.0, 0.0};
    const CoulombArguments frozen = coulomb_arguments(s, kUnit, ModelKind::CoherentFrozen);
    CHECK(frozen.spread == 1.0);
    CHECK(frozen.a_arg == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(frozen.b_arg == doctest::Approx(1.0).epsilon(1e-15));

    // Frozen arguments ignore t entirely.
    const CoulombArguments frozen_t = coulomb_arguments({2.5, 1.0, 3.0}, kUnit,
                                                        ModelKind::CoherentFrozen);
    CHECK(frozen_t.spread == 1.0);
    CHECK(frozen_t.a_arg == frozen.a_arg);
    CHECK(frozen_t.b_arg == frozen.b_arg);

    // Spreading: width factor sqrt(1 + (omega t)^2) with omega = 2 here.
    const CoulombArguments spr = coulomb_arguments({2.5, 1.0, 3.0}, kUnit,
                                                   ModelKind::CoherentSpreading);
    CHECK(spr.spread == doctest::Approx(std::sqrt(37.0)).epsilon(1e-15));
    CHECK(spr.a_arg == doctest::Approx(5.0 / std::sqrt(37.0)).epsilon(1e-14));
    // L = p - 2 x omega t = 1 - 30.
    CHECK(spr.b_arg == doctest::Approx(29.0 / std::sqrt(37.0)).epsilon(1e-14));

    const CoulombArguments cls = coulomb_arguments(s, kUnit, ModelKind::ClassicalCoulomb);
    CHECK(cls.spread == 1.0);
    CHECK(cls.a_arg == 0.0);
    CHECK(cls.b_arg == 0.0);
}

TEST_CASE("coulomb expectation reference values") {
    CHECK(coulomb_expectation({2.5, 1.0}, kUnit, ModelKind::CoherentFrozen) ==
          doctest::Approx(0.19999999999228215).epsilon(1e-12));
    // Far out, the smeared interaction approaches the point-charge one.
    CHECK(coulomb_expectation({50.0, 1.0}, kUnit, ModelKind::CoherentFrozen) ==
          doctest::Approx(0.01).epsilon(1e-12));
    CHECK(coulomb_expectation({2.5, 1.0}, kUnit, ModelKind::ClassicalCoulomb) ==
          doctest::Approx(0.2).epsilon(1e-15));
    CHECK(coulomb_expectation({2.5, 1.0}, kUnit, ModelKind::Free) == 0.0);
    CHECK_THROWS_AS(coulomb_expectation({0.0, 1.0}, kUnit, ModelKind::ClassicalCoulomb),
                    SingularityError);
}

TEST_CASE("coulomb expectation near the null state approaches its finite limit") {
    // V -> (4 / (3 sqrt(pi))) e0^2 sigma / hbar as alpha -> 0.
    const double limit = 4.0 / (3.0 * std::sqrt(M_PI));
    const double v = coulomb_expectation({0.0, 2e-4}, kUnit, ModelKind::CoherentFrozen);
    CHECK(v == doctest::Approx(limit).epsilon(1e-5));
}

TEST_CASE("null-state guard trips for both coherent models") {
    const PhaseState inside{1e-6, 1e-6};
    CHECK(alpha_sq(inside, kUnit) < kAlphaSqGuard);
    CHECK_THROWS_AS(coulomb_expectation(inside, kUnit, ModelKind::CoherentFrozen), GuardError);
    CHECK_THROWS_AS(coulomb_expectation(inside, kUnit, ModelKind::CoherentSpreading), GuardError);
    CHECK_THROWS_AS(hamiltonian(inside, kUnit, ModelKind::CoherentFrozen), GuardError);
    CHECK_THROWS_AS(grad_hamiltonian(inside, kUnit, ModelKind::CoherentFrozen), GuardError);
    // Just outside the guard everything works.
    CHECK_NOTHROW(coulomb_expectation({0.0, 2e-4}, kUnit, ModelKind::CoherentFrozen));
    // Classical and free states don't care about the guard.
    CHECK_NOTHROW(hamiltonian(inside, kUnit, ModelKind::ClassicalCoulomb));
    CHECK_NOTHROW(hamiltonian(inside, kUnit, ModelKind::Free));
}

TEST_CASE("hamiltonian reference values per model") {
    CHECK(hamiltonian({2.5, 1.0}, kUnit, ModelKind::Free).h_total == 1.0);
    CHECK(hamiltonian({2.5, 1.0}, kUnit, ModelKind::ClassicalCoulomb).h_total ==
          doctest::Approx(1.2).epsilon(1e-15));
    CHECK(hamiltonian({2.5, 1.0}, kUnit, ModelKind::CoherentFrozen).h_total ==
          doctest::Approx(4.2000000001251179).epsilon(1e-12));

    const EnergyBreakdown free_e = hamiltonian({2.5, 1.0}, kUnit, ModelKind::Free);
    CHECK(free_e.t_conf == 0.0);
    CHECK(free_e.t_corr == 0.0);
    CHECK(free_e.v == 0.0);

    const EnergyBreakdown e = hamiltonian({2.5, 1.0}, kUnit, ModelKind::CoherentFrozen);
    CHECK(e.h_total == e.t_cl + e.t_conf + e.t_corr + e.v);
}

TEST_CASE("spreading model coincides with frozen at t = 0") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-6.0, 6.0);
    std::uniform_real_distribution<double> up(-4.0, 4.0);
    PhysicalParams params;
    params.sigma = 1.3;
    params.hbar = 0.8;
    for (int i = 0; i < 200; ++i) {
        const PhaseState s{ux(rng), up(rng), 0.0};
        if (alpha_sq(s, params) < 10.0 * kAlphaSqGuard) continue;
        const EnergyBreakdown f = hamiltonian(s, params, ModelKind::CoherentFrozen);
        const EnergyBreakdown sp = hamiltonian(s, params, ModelKind::CoherentSpreading);
        CHECK(rel_close(f.v, sp.v, 1e-13));
        CHECK(rel_close(f.h_total, sp.h_total, 1e-13));
        const Gradient gf = grad_hamiltonian(s, params, ModelKind::CoherentFrozen);
        const Gradient gs = grad_hamiltonian(s, params, ModelKind::CoherentSpreading);
        CHECK(rel_close(gf.dh_dx, gs.dh_dx, 1e-12));
        CHECK(rel_close(gf.dh_dp, gs.dh_dp, 1e-12));
    }
}

TEST_CASE("parity: energies are even under the physical reflections") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ux(0.05, 8.0);
    std::uniform_real_distribution<double> up(0.05, 5.0);
    for (int i = 0; i < 100; ++i) {
        const double x = ux(rng);
        const double p = up(rng);
        // Frozen, classical, free: even in x and p separately, to the bit.
        for (auto model : {ModelKind::CoherentFrozen, ModelKind::ClassicalCoulomb,
                           ModelKind::Free}) {
            const double h = hamiltonian({x, p}, kUnit, model).h_total;
            CHECK(hamiltonian({-x, p}, kUnit, model).h_total == h);
            CHECK(hamiltonian({x, -p}, kUnit, model).h_total == h);
            CHECK(hamiltonian({-x, -p}, kUnit, model).h_total == h);
        }
        // Spreading at t > 0 mixes x and p, so only the joint reflection
        // (x, p) -> (-x, -p) survives as a symmetry.
        for (double t : {0.0, 0.7, 3.1}) {
            const double h = hamiltonian({x, p, t}, kUnit, ModelKind::CoherentSpreading).h_total;
            CHECK(hamiltonian({-x, -p, t}, kUnit, ModelKind::CoherentSpreading).h_total == h);
        }
    }
}

TEST_CASE("analytic gradients match 5-point finite differences") {
    std::vector<double> xs = {-10.0, -5.0, -2.5, -1.0, -0.3, 0.0, 0.3, 1.0, 2.5, 5.0, 10.0};
    std::vector<double> ps = {-5.0, -2.0, -1.0, -0.3, 0.0, 0.3, 1.0, 2.0, 5.0};
    for (auto model : kAllModels) {
        for (double x : xs) {
            for (double p : ps) {
                const PhaseState s{x, p, 0.0};
                if (model == ModelKind::ClassicalCoulomb && std::fabs(x) < 0.2) continue;
                if ((model == ModelKind::CoherentFrozen ||
                     model == ModelKind::CoherentSpreading) &&
                    alpha_sq(s, kUnit) < 1e-2)
                    continue; // keep FD stencils clear of the guard
                const Gradient g = grad_hamiltonian(s, kUnit, model);
                const double hx = 1e-3 * std::max(1.0, std::fabs(x));
                const double hp = 1e-3 * std::max(1.0, std::fabs(p));
                const auto fdx = oracle::grad_hamiltonian_fd(s, kUnit, model, hx).dh_dx;
                const auto fdp = oracle::grad_hamiltonian_fd(s, kUnit, model, hp).dh_dp;
                // Components that vanish by symmetry (dH/dx at x = 0 etc.)
                // leave only ~1e-13 rounding noise in the stencil; both
                // sides below 1e-8 counts as agreement, not a 0/0 ratio.
                const auto rel_err = [](double a, double b) {
                    const double m = std::max(std::fabs(a), std::fabs(b));
                    if (m < 1e-8) return 0.0;
                    return std::fabs(a - b) / m;
                };
                CHECK(rel_err(g.dh_dx, fdx) < 1e-6);
                CHECK(rel_err(g.dh_dp, fdp) < 1e-6);
            }
        }
    }
}

TEST_CASE("gradients at time t for the spreading model") {
    for (double t : {0.4, 2.0}) {
        for (double x : {-3.0, 1.5}) {
            for (double p : {-2.0, 0.8}) {
                const PhaseState s{x, p, t};
                const Gradient g = grad_hamiltonian(s, kUnit, ModelKind::CoherentSpreading);
                const auto fd =
                    oracle::grad_hamiltonian_fd(s, kUnit, ModelKind::CoherentSpreading, 1e-3);
                CHECK(rel_close(g.dh_dx, fd.dh_dx, 1e-6));
                CHECK(rel_close(g.dh_dp, fd.dh_dp, 1e-6));
            }
        }
    }
}

TEST_CASE("gradient closed forms for the reference models") {
    const Gradient cls = grad_hamiltonian({2.5, 1.0}, kUnit, ModelKind::ClassicalCoulomb);
    CHECK(cls.dh_dx == doctest::Approx(-0.08).epsilon(1e-15));
    CHECK(cls.dh_dp == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(grad_hamiltonian({0.0, 1.0}, kUnit, ModelKind::ClassicalCoulomb),
                    SingularityError);

    const Gradient fr = grad_hamiltonian({2.5, -1.0}, kUnit, ModelKind::Free);
    CHECK(fr.dh_dx == 0.0);
    CHECK(fr.dh_dp == -2.0);
}

TEST_CASE("spreading exchange exponent stays within range for physical states") {
    // The collapsed exponent K = s_b - 4|alpha|^2 is non-positive for every
    // real state, so the overflow trap exists only as a defensive bound.
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ux(-20.0, 20.0);
    std::uniform_real_distribution<double> up(-10.0, 10.0);
    std::uniform_real_distribution<double> ut(0.0, 10.0);
    for (int i = 0; i < 500; ++i) {
        const PhaseState s{ux(rng), up(rng), ut(rng)};
        if (alpha_sq(s, kUnit) < kAlphaSqGuard) continue;
        CHECK_NOTHROW(coulomb_expectation(s, kUnit, ModelKind::CoherentSpreading));
    }
}
