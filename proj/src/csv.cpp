#include "qscatter/csv.hpp"

#include <cstdio>
#include <sstream>

#include "qscatter/energy.hpp"
#include "qscatter/format.hpp"

namespace qscatter {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

const CsvSchema kTrajectorySchema{
    "trajectory", {"t", "x", "p", "t_cl", "t_conf", "t_corr", "v", "h_total"}};
const CsvSchema kSweepSchema{
    "sweep",
    {"p0", "p0_over_sigma", "t_ret_coherent", "t_ret_classical", "t_ret_free", "classification"}};
const CsvSchema kEnergySchema{
    "energy", {"x", "p", "t_cl", "t_conf", "t_corr", "v", "h_total"}};

namespace {

std::string render(const CsvCell& cell) {
    if (std::holds_alternative<std::monostate>(cell)) return "NA";
    if (const double* d = std::get_if<double>(&cell)) return format_double(*d);
    const std::string& s = std::get<std::string>(cell);
    if (s.find_first_of(",\n#") != std::string::npos)
        throw std::logic_error("CSV cell would need quoting: '" + s + "'");
    return s;
}

// Meta lines for the config echo: one "# key = value" per config line.
std::vector<std::string> config_meta(const Config& config) {
    std::vector<std::string> meta;
    std::istringstream lines(serialize_config(config));
    std::string line;
    while (std::getline(lines, line)) meta.push_back(line);
    return meta;
}

} // namespace

void write_csv(std::ostream& out, const CsvSchema& schema, const std::vector<std::string>& meta,
               const std::vector<std::vector<CsvCell>>& rows) {
    for (const std::string& m : meta) out << "# " << m << '\n';
    for (size_t i = 0; i < schema.columns.size(); ++i) {
        if (i) out << ',';
        out << schema.columns[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != schema.columns.size())
            throw std::logic_error("CSV row arity " + std::to_string(row.size()) +
                                   " does not match schema '" + schema.name + "' with " +
                                   std::to_string(schema.columns.size()) + " columns");
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << render(row[i]);
        }
        out << '\n';
    }
}

std::string trajectory_csv(const Trajectory& traj) {
    std::vector<std::string> meta = config_meta({traj.params, traj.scenario});
    meta.push_back("classification = " + std::string(to_string(traj.classification)));
    meta.push_back("return_time = " +
                   (traj.return_time ? format_double(*traj.return_time) : std::string("NA")));

    std::vector<std::vector<CsvCell>> rows;
    rows.reserve(traj.samples.size());
    for (const TrajectorySample& s : traj.samples) {
        const EnergyBreakdown e =
            hamiltonian({s.x, s.p, s.t}, traj.params, traj.scenario.model);
        rows.push_back({s.t, s.x, s.p, e.t_cl, e.t_conf, e.t_corr, e.v, e.h_total});
    }

    std::ostringstream out;
    write_csv(out, kTrajectorySchema, meta, rows);
    return out.str();
}

std::string sweep_csv(const SweepResult& sweep) {
    std::vector<std::string> meta = config_meta({sweep.params, sweep.scenario});
    meta.push_back("grid_points = " + std::to_string(sweep.rows.size()));

    std::vector<std::vector<CsvCell>> rows;
    rows.reserve(sweep.rows.size());
    for (const SweepRow& r : sweep.rows) {
        CsvCell coherent = r.t_ret_coherent ? CsvCell(*r.t_ret_coherent) : CsvCell(std::monostate{});
        CsvCell classical =
            r.t_ret_classical ? CsvCell(*r.t_ret_classical) : CsvCell(std::monostate{});
        CsvCell cls = r.error.empty() ? CsvCell(std::string(to_string(r.classification)))
                                      : CsvCell(std::string("error"));
        rows.push_back({r.p0, r.p0_over_sigma, coherent, classical, r.t_ret_free, cls});
    }

    std::ostringstream out;
    write_csv(out, kSweepSchema, meta, rows);
    return out.str();
}

std::string energy_csv(const EnergyGridResult& grid) {
    // Only the knobs the tabulation actually uses: physical constants, the
    // model, and the grid itself.
    std::vector<std::string> meta = {
        "sigma = " + format_double(grid.params.sigma),
        "mass = " + format_double(grid.params.mass),
        "hbar = " + format_double(grid.params.hbar),
        "e0sq = " + format_double(grid.params.e0sq),
        "model = " + std::string(to_string(grid.model)),
    };
    auto bounds = [](const std::vector<double>& v) {
        return v.empty() ? std::string("[]")
                         : "[" + format_double(v.front()) + ", " + format_double(v.back()) + "]";
    };
    meta.push_back("x_grid = " + std::to_string(grid.xs.size()) + " points " + bounds(grid.xs));
    meta.push_back("p_grid = " + std::to_string(grid.ps.size()) + " points " + bounds(grid.ps));

    std::vector<std::vector<CsvCell>> rows;
    rows.reserve(grid.rows.size());
    for (const EnergyGridRow& r : grid.rows) {
        if (r.energy) {
            const EnergyBreakdown& e = *r.energy;
            rows.push_back({r.x, r.p, e.t_cl, e.t_conf, e.t_corr, e.v, e.h_total});
        } else {
            rows.push_back({r.x, r.p, std::monostate{}, std::monostate{}, std::monostate{},
                            std::monostate{}, std::monostate{}});
        }
    }

    std::ostringstream out;
    write_csv(out, kEnergySchema, meta, rows);
    return out.str();
}

} // namespace qscatter
