#ifndef VSC_TOOLS_CONFIG_HPP
#define VSC_TOOLS_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace vsc::cli {

// Settings shared by every subcommand; command-line flags override these.
struct Config {
    unsigned threads = 1;
    int retry_limit = 8;
    int closed_J = -1;       // -1: the model's dimension
    int open_j_max = 3;
    int unit_extra = 0;
    std::string cache_dir;   // empty: caching disabled
};

// Lines "key = value"; '#' starts a comment. Unknown keys and bad values throw UsageError.
Config parse_config(std::string_view text, const std::string &origin = "<config>");
Config load_config(const std::filesystem::path &path);

// The file named by $VSC_CONFIG if set, then $VSC_CACHE_DIR over cache_dir.
Config config_from_environment();

} // namespace vsc::cli

#endif
