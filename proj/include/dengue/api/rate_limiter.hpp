#pragma once

#include <chrono>
#include <deque>
#include <mutex>
#include <string>
#include <unordered_map>

#include "dengue/core/time.hpp"

namespace dengue::api {

/// Sliding one-minute window per key.
class RateLimiter {
public:
    explicit RateLimiter(std::size_t per_minute) : limit_(per_minute) {}

    /// Records a request at `now`; false once `key` has used its allowance
    /// for the trailing minute. A limit of 0 disables limiting.
    bool allow(const std::string& key, Timestamp now);

private:
    std::size_t limit_;
    std::mutex mu_;
    std::unordered_map<std::string, std::deque<Timestamp>> hits_;
    Timestamp last_sweep_{};
};

}  // namespace dengue::api
