#ifndef QSCATTER_CSV_HPP
#define QSCATTER_CSV_HPP

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "qscatter/dynamics.hpp"
#include "qscatter/params.hpp"
#include "qscatter/sweep.hpp"

namespace qscatter {

// Column layout of one dataset.  All emission funnels through write_csv so
// every file shares the same byte-level conventions: '\n' newlines, '#'
// metadata lines carrying the resolved configuration, 17-significant-digit
// scientific floats, the literal NA for absent values.
struct CsvSchema {
    std::string name;
    std::vector<std::string> columns;
};

extern const CsvSchema kTrajectorySchema; // t,x,p,t_cl,t_conf,t_corr,v,h_total
extern const CsvSchema kSweepSchema;      // p0,p0_over_sigma,t_ret_coherent,t_ret_classical,t_ret_free,classification
extern const CsvSchema kEnergySchema;     // x,p,t_cl,t_conf,t_corr,v,h_total

// monostate renders as NA.
using CsvCell = std::variant<std::monostate, double, std::string>;

// Throws std::logic_error if a row's arity disagrees with the schema: that
// is an internal bug, not a user error.
void write_csv(std::ostream& out, const CsvSchema& schema, const std::vector<std::string>& meta,
               const std::vector<std::vector<CsvCell>>& rows);

std::string trajectory_csv(const Trajectory& traj);
std::string sweep_csv(const SweepResult& sweep);
std::string energy_csv(const EnergyGridResult& grid);

} // namespace qscatter

#endif
