#include <doctest.h>

#include <cmath>

#include "qscatter/csv.hpp"
#include "qscatter/errors.hpp"
#include "qscatter/sweep.hpp"

using namespace qscatter;

namespace {
const PhysicalParams kUnit{};
} // namespace

TEST_CASE("default momentum grid shape") {
    const auto grid = default_momentum_grid(1.0);
    REQUIRE(grid.size() == 60);
    CHECK(grid.front() == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(grid.back() == doctest::Approx(3.0).epsilon(1e-14));
    // Log spacing: constant ratio between neighbours.
    const double r = grid[1] / grid[0];
    for (size_t i = 1; i + 1 < grid.size(); ++i) {
        CHECK(grid[i + 1] / grid[i] == doctest::Approx(r).epsilon(1e-10));
    }
    // The grid scales with sigma.
    const auto wide = default_momentum_grid(2.0);
    CHECK(wide.front() == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(wide.back() == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("linspace endpoints and validation") {
    const auto g = linspace(-2.5, 2.5, 51);
    REQUIRE(g.size() == 51);
    CHECK(g.front() == -2.5);
    CHECK(g.back() == 2.5);
    CHECK(g[25] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(linspace(1.0, 1.0, 1).size() == 1);
    CHECK_THROWS_AS(linspace(1.0, -1.0, 5), ValidationError);
    CHECK_THROWS_AS(linspace(0.0, 1.0, 0), ValidationError);
}

TEST_CASE("sweep rows carry all three observables and one regime transition") {
    const ScenarioConfig base; // coherent-frozen template
    const auto grid = default_momentum_grid(kUnit.sigma);
    const SweepResult sw = sweep_return_time(grid, base, kUnit, false);
    REQUIRE(sw.rows.size() == grid.size());

    int transitions = 0;
    for (size_t i = 0; i < sw.rows.size(); ++i) {
        const SweepRow& row = sw.rows[i];
        CHECK(row.error.empty());
        CHECK(row.p0 == grid[i]);
        CHECK(row.p0_over_sigma == doctest::Approx(grid[i] / kUnit.sigma).epsilon(1e-15));
        REQUIRE(row.t_ret_coherent.has_value());
        REQUIRE(row.t_ret_classical.has_value());
        CHECK(row.t_ret_free == doctest::Approx(2.0 * kUnit.mass * base.x0 / grid[i]).epsilon(1e-15));
        CHECK(*row.t_ret_coherent > 0.0);
        CHECK(*row.t_ret_classical > 0.0);
        if (i > 0 && sw.rows[i - 1].classification != row.classification) ++transitions;
    }
    CHECK(sw.rows.front().classification == Classification::Deflection);
    CHECK(sw.rows.back().classification == Classification::Penetration);
    CHECK(transitions == 1);

    // Free column strictly decreasing in p0.
    for (size_t i = 0; i + 1 < sw.rows.size(); ++i)
        CHECK(sw.rows[i + 1].t_ret_free < sw.rows[i].t_ret_free);
}

TEST_CASE("serial and parallel sweeps are byte-identical") {
    const ScenarioConfig base;
    const auto grid = default_momentum_grid(kUnit.sigma);
    const SweepResult serial = sweep_return_time(grid, base, kUnit, false);
    const SweepResult parallel = sweep_return_time(grid, base, kUnit, true);
    CHECK(sweep_csv(serial) == sweep_csv(parallel));
}

TEST_CASE("sweep points that fail keep their error and render as NA") {
    ScenarioConfig base;
    base.x0 = 1e-5; // launch just outside the null-state guard...
    base.t_max = 1.0;
    // ...so a tiny momentum lands inside it and fails, a normal one works.
    const SweepResult sw = sweep_return_time({1e-5, 1.0}, base, kUnit, false);
    REQUIRE(sw.rows.size() == 2);
    CHECK(!sw.rows[0].error.empty());
    CHECK(!sw.rows[0].t_ret_coherent.has_value());
    CHECK(!sw.rows[0].t_ret_classical.has_value());
    CHECK(sw.rows[1].error.empty());

    const std::string csv = sweep_csv(sw);
    CHECK(csv.find("NA") != std::string::npos);
    CHECK(csv.find("error") != std::string::npos);
}

TEST_CASE("energy tabulation marks rejected states and fills the rest") {
    const auto xs = linspace(-1.0, 1.0, 5); // includes x = 0
    const auto ps = linspace(-1.0, 1.0, 5); // includes p = 0
    const EnergyGridResult grid =
        tabulate_energy(xs, ps, kUnit, ModelKind::CoherentFrozen, false);
    REQUIRE(grid.rows.size() == 25);
    int failed = 0;
    for (const auto& row : grid.rows) {
        if (row.error.empty()) {
            REQUIRE(row.energy.has_value());
            CHECK(std::isfinite(row.energy->h_total));
        } else {
            CHECK(!row.energy.has_value());
            ++failed;
        }
    }
    CHECK(failed == 1); // only the null state (0, 0) is rejected

    // x-major layout: rows[i * ps.size() + j] == (xs[i], ps[j]).
    CHECK(grid.rows[7].x == xs[1]);
    CHECK(grid.rows[7].p == ps[2]);

    const EnergyGridResult classical =
        tabulate_energy(xs, ps, kUnit, ModelKind::ClassicalCoulomb, false);
    int singular = 0;
    for (const auto& row : classical.rows)
        if (!row.error.empty()) ++singular;
    CHECK(singular == 5); // the whole x = 0 column
}

TEST_CASE("serial and parallel energy tabulations are byte-identical") {
    const auto xs = linspace(-2.5, 2.5, 41);
    const auto ps = linspace(-2.5, 2.5, 41);
    const EnergyGridResult serial = tabulate_energy(xs, ps, kUnit, ModelKind::CoherentFrozen, false);
    const EnergyGridResult parallel = tabulate_energy(xs, ps, kUnit, ModelKind::CoherentFrozen, true);
    CHECK(energy_csv(serial) == energy_csv(parallel));
}

TEST_CASE("critical momentum bisection converges onto the pinned transition") {
    const ScenarioConfig base;
    const CriticalMomentum cm = find_critical_momentum(0.2, 2.0, base, kUnit, 1e-6);
    CHECK(cm.p_cr == doctest::Approx(1.2458945751190187).epsilon(2e-6));
    CHECK(cm.p_hi - cm.p_lo <= 1e-6);
    CHECK(cm.p_lo < cm.p_cr);
    CHECK(cm.p_cr < cm.p_hi);
    CHECK(cm.tolerance == 1e-6);
    // ceil(log2(1.8 / 1e-6)) = 21 halvings.
    CHECK(cm.iterations == 21);
}

TEST_CASE("critical momentum bracket validation") {
    const ScenarioConfig base;
    CHECK_THROWS_AS(find_critical_momentum(2.0, 0.2, base, kUnit, 1e-6), ValidationError);
    CHECK_THROWS_AS(find_critical_momentum(0.0, 2.0, base, kUnit, 1e-6), ValidationError);
    CHECK_THROWS_AS(find_critical_momentum(0.2, 2.0, base, kUnit, 0.0), ValidationError);
    // Both ends penetrate.
    CHECK_THROWS_AS(find_critical_momentum(1.5, 2.0, base, kUnit, 1e-4), BracketError);
    // Both ends deflect.
    CHECK_THROWS_AS(find_critical_momentum(0.2, 1.0, base, kUnit, 1e-4), BracketError);
}

TEST_CASE("undetermined probes abort the bisection with a useful message") {
    ScenarioConfig base;
    base.t_max = 1.0; // far too short to classify anything
    try {
        find_critical_momentum(0.2, 2.0, base, kUnit, 1e-4);
        FAIL("expected BracketError");
    } catch (const BracketError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("t_max") != std::string::npos);
    }
}
