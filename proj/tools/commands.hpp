#ifndef VSC_TOOLS_COMMANDS_HPP
#define VSC_TOOLS_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace vsc::cli {

// Exit codes.
enum Exit : int {
    kOk = 0,
    kCheckFailed = 1,
    kUsage = 2,
    kBound = 3,
    kUnsupported = 4,
    kIndecisive = 5,
    kInternal = 70,
};

// Runs the command line (args[0] is the program name) writing results to `out` and diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace vsc::cli

#endif
