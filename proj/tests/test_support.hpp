#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include "dengue/core/time.hpp"

namespace testing {

/// Manually advanced clock shared by value-captured lambdas.
class FakeClock {
public:
    explicit FakeClock(dengue::Timestamp start) : ms_(dengue::to_unix_ms(start)) {}

    dengue::Timestamp now() const { return dengue::from_unix_ms(ms_.load()); }
    void advance(std::chrono::milliseconds d) { ms_ += d.count(); }
    dengue::Clock clock() {
        return [this] { return now(); };
    }

private:
    std::atomic<std::int64_t> ms_;
};

inline dengue::Timestamp at(const char* rfc3339) { return *dengue::parse_rfc3339(rfc3339); }

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("dengue-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

}  // namespace testing
