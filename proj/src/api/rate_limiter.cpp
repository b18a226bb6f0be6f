#include "dengue/api/rate_limiter.hpp"

namespace dengue::api {

bool RateLimiter::allow(const std::string& key, Timestamp now) {
    if (limit_ == 0) return true;
    constexpr std::chrono::minutes kWindow{1};
    std::lock_guard lock(mu_);

    if (now - last_sweep_ > kWindow) {
        std::erase_if(hits_, [&](const auto& kv) { return kv.second.empty() || now - kv.second.back() >= kWindow; });
        last_sweep_ = now;
    }

    auto& hits = hits_[key];
    while (!hits.empty() && now - hits.front() >= kWindow) hits.pop_front();
    if (hits.size() >= limit_) return false;
    hits.push_back(now);
    return true;
}

}  // namespace dengue::api
