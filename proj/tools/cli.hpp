#ifndef MVPDL_TOOLS_CLI_HPP
#define MVPDL_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace mvpdl::cli {

/// Exit statuses: 0 affirmative verdict, 1 negative verdict, 2 error.
enum ExitCode : int { kYes = 0, kNo = 1, kError = 2 };

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mvpdl::cli

#endif  // MVPDL_TOOLS_CLI_HPP
