#ifndef PORTARB_CLI_HPP_
#define PORTARB_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace portarb
{

enum ExitStatus : int
{
  kExitOk = 0,
  kExitValidation = 1,  // validation errors, or warnings under --strict
  kExitUsage = 2,       // bad arguments or unparsable input
  kExitIo = 3,
};

/// Runs `portarb <command> ...`; `args` excludes the program name. Artifacts
/// go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace portarb

#endif  // PORTARB_CLI_HPP_
