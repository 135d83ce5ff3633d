#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace unimoments::cli {

/// Runs one CLI invocation. args excludes the program name. Reports go to
/// out (or the --output file), diagnostics to err. Returns the process exit
/// code: 0 success, 1 I/O or parse, 2 validation, 3 precondition, 4
/// resource cap, 5 internal.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

int run(int argc, char** argv);

}  // namespace unimoments::cli
