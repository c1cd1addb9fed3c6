#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gridp2p::cli {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
    kOk = 0,
    kFailure = 1,     ///< audit found problems, or an unexpected error
    kValidation = 2,  ///< bad flags, invalid scenario or unusable parameters
    kIo = 3,
};

/** Runs the tool with `args` (program name excluded).
 *
 *   simulate    --scenario <path> | --seed <u64>, --mode, --out, --price-rule, --jobs
 *   gen-fixture --seed <u64> --out <path> [--prosumers <n> --sellers <n>]
 *   audit       --dir <path> [--scenario <path>]
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gridp2p::cli
