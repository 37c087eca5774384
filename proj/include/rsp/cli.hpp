#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rsp {

/// Subcommands: stats, solve, experiment, gridbench, paths.
/// Exit status 0 on success, 1 on domain errors, 2 on usage errors.
int cli_main(int argc, char** argv);

/// Same, with `args` excluding the program name and explicit output streams.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rsp
