#include "qscatter/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "qscatter/csv.hpp"
#include "qscatter/dynamics.hpp"
#include "qscatter/errors.hpp"
#include "qscatter/format.hpp"
#include "qscatter/params.hpp"
#include "qscatter/sweep.hpp"

namespace qscatter {

namespace {

// Shared flags are collected as optionals so that explicitly set values
// can be layered over --config file values, which in turn layer over the
// built-in defaults, regardless of flag order.
struct SharedFlags {
    std::optional<double> sigma, mass, hbar, e0sq, x0, p0, t_max, rtol, atol, event_tol;
    std::optional<std::string> model;
    std::optional<std::string> config_path;
};

void add_shared_flags(CLI::App* cmd, SharedFlags& fv) {
    cmd->add_option("--sigma", fv.sigma, "packet width parameter");
    cmd->add_option("--mass", fv.mass, "single-particle mass");
    cmd->add_option("--hbar", fv.hbar, "reduced Planck constant");
    cmd->add_option("--e0sq", fv.e0sq, "squared elementary charge");
    cmd->add_option("--x0", fv.x0, "initial half-separation");
    cmd->add_option("--p0", fv.p0, "initial momentum magnitude");
    cmd->add_option("--model", fv.model,
                    "coherent-frozen | coherent-spreading | classical | free");
    cmd->add_option("--t-max", fv.t_max, "integration horizon");
    cmd->add_option("--rtol", fv.rtol, "integrator relative tolerance");
    cmd->add_option("--atol", fv.atol, "integrator absolute tolerance");
    cmd->add_option("--event-tol", fv.event_tol, "return-event localization tolerance");
    cmd->add_option("--config", fv.config_path, "key = value configuration file");
}

Config resolve_config(const SharedFlags& fv) {
    Config c = fv.config_path ? load_config_file(*fv.config_path) : Config{};
    if (fv.sigma) c.params.sigma = *fv.sigma;
    if (fv.mass) c.params.mass = *fv.mass;
    if (fv.hbar) c.params.hbar = *fv.hbar;
    if (fv.e0sq) c.params.e0sq = *fv.e0sq;
    if (fv.x0) c.scenario.x0 = *fv.x0;
    if (fv.p0) c.scenario.p0 = *fv.p0;
    if (fv.model) c.scenario.model = model_from_string(*fv.model);
    if (fv.t_max) c.scenario.t_max = *fv.t_max;
    if (fv.rtol) c.scenario.rtol = *fv.rtol;
    if (fv.atol) c.scenario.atol = *fv.atol;
    if (fv.event_tol) c.scenario.event_tol = *fv.event_tol;
    c.params.validate();
    c.scenario.validate();
    return c;
}

void write_output(const std::optional<std::string>& path, const std::string& content) {
    if (!path) {
        std::cout << content;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file '" + *path + "' for writing");
    out << content;
    if (!out.good()) throw ValidationError("failed writing output file '" + *path + "'");
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Head-on collision of two coherent-state electrons: trajectories, "
                 "return-time sweeps, critical momentum, energy surfaces"};
    app.require_subcommand(1);

    SharedFlags traj_flags, sweep_flags, crit_flags, energy_flags;
    std::optional<std::string> traj_out, sweep_out, crit_out, energy_out;

    CLI::App* traj = app.add_subcommand(
        "trajectory", "Integrate one scenario and emit the sampled trajectory as CSV");
    add_shared_flags(traj, traj_flags);
    traj->add_option("--out", traj_out, "output CSV path (default: stdout)");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "Return-time observables over the default momentum grid, as CSV");
    add_shared_flags(sweep, sweep_flags);
    sweep->add_option("--out", sweep_out, "output CSV path (default: stdout)");

    CLI::App* crit = app.add_subcommand(
        "critical", "Bisect the deflection/penetration transition momentum");
    add_shared_flags(crit, crit_flags);
    std::optional<double> crit_plo, crit_phi;
    double crit_tol = 1e-6;
    crit->add_option("--p-lo", crit_plo, "lower bracket end (default 0.2*sigma)");
    crit->add_option("--p-hi", crit_phi, "upper bracket end (default 2*sigma)");
    crit->add_option("--tol", crit_tol, "bracket width tolerance (default 1e-6)");
    crit->add_option("--out", crit_out, "output path (default: stdout)");

    CLI::App* energy = app.add_subcommand(
        "energy", "Tabulate the energy breakdown on a rectangular (x, p) grid, as CSV");
    add_shared_flags(energy, energy_flags);
    double ex_min = -2.5, ex_max = 2.5, ep_min = -2.5, ep_max = 2.5;
    int ex_count = 51, ep_count = 51;
    energy->add_option("--x-min", ex_min, "grid lower x bound (default -2.5)");
    energy->add_option("--x-max", ex_max, "grid upper x bound (default 2.5)");
    energy->add_option("--x-count", ex_count, "grid points along x (default 51)");
    energy->add_option("--p-min", ep_min, "grid lower p bound (default -2.5)");
    energy->add_option("--p-max", ep_max, "grid upper p bound (default 2.5)");
    energy->add_option("--p-count", ep_count, "grid points along p (default 51)");
    energy->add_option("--out", energy_out, "output CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 2;
    }

    try {
        if (traj->parsed()) {
            const Config cfg = resolve_config(traj_flags);
            write_output(traj_out, trajectory_csv(integrate(cfg.scenario, cfg.params)));
        } else if (sweep->parsed()) {
            const Config cfg = resolve_config(sweep_flags);
            const SweepResult result = sweep_return_time(
                default_momentum_grid(cfg.params.sigma), cfg.scenario, cfg.params);
            write_output(sweep_out, sweep_csv(result));
        } else if (crit->parsed()) {
            const Config cfg = resolve_config(crit_flags);
            const double p_lo = crit_plo.value_or(0.2 * cfg.params.sigma);
            const double p_hi = crit_phi.value_or(2.0 * cfg.params.sigma);
            const CriticalMomentum cm =
                find_critical_momentum(p_lo, p_hi, cfg.scenario, cfg.params, crit_tol);
            std::string report;
            report += "p_cr = " + format_double(cm.p_cr) + "\n";
            report += "p_cr_over_sigma = " + format_double(cm.p_cr / cfg.params.sigma) + "\n";
            report += "bracket = [" + format_double(cm.p_lo) + ", " + format_double(cm.p_hi) +
                      "]\n";
            report += "iterations = " + std::to_string(cm.iterations) + "\n";
            report += "tolerance = " + format_double(cm.tolerance) + "\n";
            write_output(crit_out, report);
        } else if (energy->parsed()) {
            const Config cfg = resolve_config(energy_flags);
            const EnergyGridResult grid =
                tabulate_energy(linspace(ex_min, ex_max, ex_count),
                                linspace(ep_min, ep_max, ep_count), cfg.params,
                                cfg.scenario.model);
            write_output(energy_out, energy_csv(grid));
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const StiffnessError& e) {
        std::cerr << "error: " << e.what() << "\nlast good state: t = " << format_double(e.t)
                  << ", x = " << format_double(e.x) << ", p = " << format_double(e.p) << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("qscatter");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

} // namespace qscatter
