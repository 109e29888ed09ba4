#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace codeclag::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kInputError = 2,
    kDegenerate = 3,
    kFlaggedCells = 4,
    kDiverged = 5,
};

/// Runs one command line (args[0] is the program name). Documents go to
/// `out`, diagnostics and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace codeclag::cli
