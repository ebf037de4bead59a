// cli.hpp — batch experiment runner: every protocol in the library is
// exposed as a subcommand that emits a self-describing machine-readable
// report (JSON by default, CSV on request) and exits 0 when all reported
// values meet their declared targets, 1 on a tolerance failure, and 2 on a
// usage error.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uqm::cli {

// Runs one subcommand in-process.  `args` excludes the program name.  The
// report goes to `out`, diagnostics to `err`.  Identical args produce
// byte-identical output.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace uqm::cli
