#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace acbell::cli {

// Entry point of the ac_bell tool. `args` excludes the program name.
// Reports go to `out`, diagnostics to `err`. Returns the process exit code:
// 0 success, 1 usage or config error, 2 computation error (singularity or
// path violation).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace acbell::cli
