#pragma once

#include <iosfwd>

namespace fairuc::cli {

/// Runs one subcommand. Returns 0 on success, 1 on a domain failure
/// (invalid instance, infeasible plan, solver failure) and 2 on a usage
/// error. Reports go to `out`, diagnostics to `err`.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fairuc::cli
