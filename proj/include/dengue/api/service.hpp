#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>

#include "dengue/api/password.hpp"
#include "dengue/api/rate_limiter.hpp"
#include "dengue/core/time.hpp"
#include "dengue/geo/clustering.hpp"
#include "dengue/store/store.hpp"

namespace dengue::api {

inline constexpr std::string_view kApiBase = "/api/v1";

struct ApiConfig {
    std::chrono::milliseconds token_lifetime = std::chrono::hours{24};
    std::chrono::milliseconds dedup_window = store::kDefaultDedupWindow;
    double hotspot_radius_m = geo::kDefaultHotspotRadiusM;
    std::size_t min_cases = geo::kDefaultMinCases;
    double site_radius_m = geo::kDefaultSiteRadiusM;
    std::size_t rate_limit_per_minute = 60;
    int password_iterations = kDefaultPbkdf2Iterations;
    std::string version = "dev";
};

/// Transport-neutral request: `path` excludes the query string, whose
/// decoded parameters are in `query`.
struct HttpRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::optional<std::string> authorization;
    std::string body;
};

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// The /api/v1 endpoint set, independent of any HTTP library.
///
/// Authenticated endpoints check the bearer token before looking at the
/// body, and every token failure produces the same 401 body. Handlers keep no
/// per-request state beyond the store and the per-token rate limiter.
class ApiService {
public:
    ApiService(store::Store& store, ApiConfig config, Clock clock = system_clock());

    HttpResponse handle(const HttpRequest& request);

    const ApiConfig& config() const noexcept { return config_; }

private:
    struct Session {
        std::string token;
        UserProfile user;
    };

    HttpResponse dispatch(const HttpRequest& request, std::string_view route);
    Session authenticate(const HttpRequest& request);

    HttpResponse do_register(const HttpRequest& request);
    HttpResponse do_login(const HttpRequest& request);
    HttpResponse do_logout(const Session& session);
    HttpResponse do_symptom_check(const Session& session, const HttpRequest& request);
    HttpResponse do_report_case(const Session& session, const HttpRequest& request);
    HttpResponse do_attach_location(const Session& session, const HttpRequest& request, const std::string& case_id);
    HttpResponse do_upload_locations(const Session& session, const HttpRequest& request);
    HttpResponse do_papaya_feedback(const Session& session, const HttpRequest& request);
    HttpResponse do_map_markers(const Session& session, const HttpRequest& request);
    HttpResponse do_map_hotspots(const Session& session, const HttpRequest& request);
    HttpResponse do_infection_sites(const Session& session, const HttpRequest& request);
    HttpResponse do_healthz() const;

    store::Store& store_;
    ApiConfig config_;
    Clock clock_;
    RateLimiter limiter_;
    std::string dummy_digest_;
};

}  // namespace dengue::api
