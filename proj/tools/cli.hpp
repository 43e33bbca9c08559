#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ctrlframe::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInput = 2,        // parse or validation failure
    kExitDegenerate = 3,   // zero input map, all-zero frame
    kExitInfeasible = 4,   // infeasible norms, majorization violated
    kExitUnreachable = 5,  // target outside the reachable set
};

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace ctrlframe::cli
