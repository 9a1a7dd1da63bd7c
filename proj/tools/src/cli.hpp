#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace permsft::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  /// An invariant check failed (verify).
  kCheckFailed = 1,
  /// Bad flags or malformed input.
  kUsage = 2,
  /// A kernel refused part of the work; the output is partial.
  kCapacity = 3,
};

/// Runs one subcommand. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct VerifyLine {
  std::string check;
  std::string subject;
  bool pass = true;
  std::string detail;
};

/// The invariant suite behind `verify`: the seed corpus plus any extra
/// elements (given as element JSON).
std::vector<VerifyLine> run_verify_suite(const std::vector<std::string>& extra_elements);

}  // namespace permsft::cli
