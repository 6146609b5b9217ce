#include "cache.hpp"

#include "vsc/errors.hpp"

#include <json.hpp>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iostream>

namespace vsc::cli {

NdjsonStore::NdjsonStore(std::filesystem::path dir, std::string engine) : dir_(std::move(dir)), engine_(std::move(engine))
{
    std::filesystem::create_directories(dir_);
}

std::filesystem::path NdjsonStore::file_for(const std::string &key) const
{
    std::string model = key.substr(0, key.find('|'));
    for (char &c : model)
        if (c == ':') c = '_';
    return dir_ / (model + ".ndjson");
}

void NdjsonStore::load(const std::filesystem::path &file)
{
    if (!loaded_.insert(file).second) return;
    std::ifstream in(file);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            if (j.at("engine").get<std::string>() != engine_) continue;
            entries_.emplace(j.at("key").get<std::string>(), parse_rational(j.at("value").get<std::string>()));
        } catch (const std::exception &e) {
            ++skipped_;
            std::cerr << "warning: skipping corrupt cache line " << file.string() << ":" << lineno << "\n";
        }
    }
}

std::optional<BigRational> NdjsonStore::find(const std::string &key)
{
    std::lock_guard lock(mutex_);
    load(file_for(key));
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void NdjsonStore::put(const std::string &key, const BigRational &value)
{
    std::lock_guard lock(mutex_);
    const auto file = file_for(key);
    load(file);
    if (!entries_.emplace(key, value).second) return;

    const std::string line = nlohmann::json{{"key", key}, {"value", to_string(value)}, {"engine", engine_}}.dump() + "\n";
    const int fd = ::open(file.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd < 0) throw RepresentationError("cache: cannot open " + file.string() + ": " + std::strerror(errno));
    ::flock(fd, LOCK_EX);
    std::size_t done = 0;
    while (done < line.size()) {
        const ssize_t n = ::write(fd, line.data() + done, line.size() - done);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) break;
        done += static_cast<std::size_t>(n);
    }
    ::flock(fd, LOCK_UN);
    ::close(fd);
}

} // namespace vsc::cli
