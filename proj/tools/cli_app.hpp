#pragma once

#include <iosfwd>

namespace pbs::cli {

/// Exit statuses of the command-line tool.
enum ExitStatus : int {
  kOk = 0,
  kCheckFailed = 1,
  kInputError = 2,
  kEngineError = 3,
};

/// Runs `pbs transition|solve|verify|bench ...`. Results go to `out`,
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pbs::cli
