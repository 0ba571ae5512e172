#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace jumpsde::tools {

/// Runs the `jumpsde` command line (args excludes the program name), writing
/// normal output to `out` and diagnostics to `err`. Exit codes: 0 success,
/// 1 usage or I/O or runtime error, 2 stability hypothesis failure or
/// negative certificate.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace jumpsde::tools
