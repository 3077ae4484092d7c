#ifndef TIMEBIN_CLI_HPP
#define TIMEBIN_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

#include "timebin/core.hpp"

namespace timebin {

// Named gate (I X Y Z H S T) or 8 whitespace-separated reals, row-major
// re/im pairs. The result must be unitary within 1e-8.
QubitMatrix parse_matrix_arg(const std::string& arg);

// Entry point behind the `timebin` binary; testable in-process.
// Exit codes: 0 ok, 1 I/O or parse failure, 2 validation, 3 simulation
// domain error. stdout carries data only; diagnostics go one-line to stderr.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace timebin

#endif
