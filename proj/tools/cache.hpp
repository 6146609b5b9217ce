#ifndef VSC_TOOLS_CACHE_HPP
#define VSC_TOOLS_CACHE_HPP

#include "vsc/correlators.hpp"

#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <unordered_map>

namespace vsc::cli {

inline constexpr const char *kEngineVersion = "vsc-1";

// Append-only NDJSON cache, one file per model: {"key": ..., "value": "p/q", "engine": ...}.
// Appends take an exclusive flock; loading reads without locking and skips partial or corrupt lines.
class NdjsonStore : public ResultStore {
public:
    explicit NdjsonStore(std::filesystem::path dir, std::string engine = kEngineVersion);

    std::optional<BigRational> find(const std::string &key) override;
    void put(const std::string &key, const BigRational &value) override;

    std::size_t skipped_lines() const { return skipped_; }
    std::filesystem::path file_for(const std::string &key) const;

private:
    void load(const std::filesystem::path &file);

    std::filesystem::path dir_;
    std::string engine_;
    std::mutex mutex_;
    std::set<std::filesystem::path> loaded_;
    std::unordered_map<std::string, BigRational> entries_;
    std::size_t skipped_ = 0;
};

} // namespace vsc::cli

#endif
