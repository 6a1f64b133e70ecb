#ifndef QSCATTER_CLI_HPP
#define QSCATTER_CLI_HPP

#include <string>
#include <vector>

namespace qscatter {

// Command-line driver behind the qscatter binary.  Subcommands: trajectory,
// sweep, critical, energy.  Returns the process exit code: 0 success,
// 2 argument/validation error, 3 numerical failure.
int run_cli(int argc, const char* const* argv);

// Test-friendly variant: args without the program name.
int run_cli(const std::vector<std::string>& args);

} // namespace qscatter

#endif
