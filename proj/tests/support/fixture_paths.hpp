#pragma once

#include "astra/util.hpp"

#include <filesystem>
#include <random>
#include <string>

namespace astra::fixtures {

inline std::filesystem::path dir(const std::string& sub = "") {
    const std::filesystem::path root(ASTRA_FIXTURES);
    return sub.empty() ? root : root / sub;
}

inline std::string read(const std::string& rel) { return util::read_file(dir() / rel); }

class TempDir {
public:
    TempDir() {
        static std::mt19937_64 rng{std::random_device{}()};
        path_ = std::filesystem::temp_directory_path() / ("astra-test-" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    std::filesystem::path path_;
};

}  // namespace astra::fixtures
