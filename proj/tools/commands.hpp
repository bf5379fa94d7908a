#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cpwl::cli {

enum ExitCode : int
{
  kOk = 0,
  kComputationFailure = 1,
  kInputError = 2,
};

/// Runs the command line `args` (args[0] is the program name). Reports go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

} // namespace cpwl::cli
