#include "config.hpp"

#include "vsc/errors.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace vsc::cli {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

int to_int(const std::string &v, const std::string &where, int lo)
{
    int out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size() || out < lo)
        throw UsageError(where + ": expected an integer >= " + std::to_string(lo) + ", got '" + v + "'");
    return out;
}

} // namespace

Config parse_config(std::string_view text, const std::string &origin)
{
    Config c;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw UsageError(where + ": expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key == "threads")
            c.threads = static_cast<unsigned>(to_int(value, where, 1));
        else if (key == "retry_limit")
            c.retry_limit = to_int(value, where, 0);
        else if (key == "closed_J")
            c.closed_J = to_int(value, where, 1);
        else if (key == "open_j_max")
            c.open_j_max = to_int(value, where, 3);
        else if (key == "unit_extra")
            c.unit_extra = to_int(value, where, 0);
        else if (key == "cache_dir")
            c.cache_dir = value;
        else
            throw UsageError(where + ": unknown key '" + key + "'");
    }
    return c;
}

Config load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

Config config_from_environment()
{
    Config c;
    if (const char *p = std::getenv("VSC_CONFIG"); p && *p) c = load_config(p);
    if (const char *p = std::getenv("VSC_CACHE_DIR"); p && *p) c.cache_dir = p;
    return c;
}

} // namespace vsc::cli
