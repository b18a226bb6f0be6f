#include "dengue/api/service.hpp"

#include <algorithm>
#include <charconv>
#include <iostream>
#include <set>

#include "dengue/api/wire.hpp"
#include "dengue/core/classifier.hpp"
#include "dengue/core/errors.hpp"

namespace dengue::api {

namespace {

struct Unauthorized {};
struct Forbidden {};
struct RateLimited {};
struct RouteNotFound {};
struct MethodNotAllowed {};

constexpr std::string_view kTokenFailureMessage = "missing, invalid or expired bearer token";
constexpr std::string_view kLoginFailureMessage = "invalid email or password";

std::string dump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

HttpResponse respond(int status, const json& body) { return {status, dump(body), "application/json"}; }

HttpResponse error(int status, std::string code, std::string message, std::optional<std::string> field = {}) {
    if (field && field->empty()) field.reset();
    return respond(status, json(ApiError{std::move(code), std::move(message), std::move(field)}));
}

template <typename T>
T parse_body(const HttpRequest& request) {
    auto j = json::parse(request.body, nullptr, false);
    if (j.is_discarded()) throw ValidationError("", "request body is not valid JSON");
    return j.get<T>();
}

std::optional<std::string> query_param(const HttpRequest& r, const std::string& name) {
    auto it = r.query.find(name);
    if (it == r.query.end() || it->second.empty()) return std::nullopt;
    return it->second;
}

double query_double(const HttpRequest& r, const std::string& name, double fallback) {
    auto text = query_param(r, name);
    if (!text) return fallback;
    double value = 0.0;
    auto [p, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
    if (ec != std::errc() || p != text->data() + text->size() || !std::isfinite(value))
        throw ValidationError(name, name + " must be a number");
    return value;
}

std::size_t query_count(const HttpRequest& r, const std::string& name, std::size_t fallback) {
    auto text = query_param(r, name);
    if (!text) return fallback;
    std::size_t value = 0;
    auto [p, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
    if (ec != std::errc() || p != text->data() + text->size())
        throw ValidationError(name, name + " must be a non-negative integer");
    return value;
}

Timestamp query_time(const HttpRequest& r, const std::string& name, Timestamp fallback) {
    auto text = query_param(r, name);
    if (!text) return fallback;
    auto t = parse_rfc3339(*text);
    if (!t) throw ValidationError(name, name + " must be an RFC 3339 timestamp");
    return *t;
}

bool is_hex_token(std::string_view t) {
    return t.size() == 64 && std::all_of(t.begin(), t.end(), [](char c) {
               return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
           });
}

void require_operator(const UserProfile& user) {
    if (user.role != Role::Operator) throw Forbidden{};
}

}  // namespace

ApiService::ApiService(store::Store& store, ApiConfig config, Clock clock)
    : store_(store),
      config_(std::move(config)),
      clock_(std::move(clock)),
      limiter_(config_.rate_limit_per_minute),
      dummy_digest_(hash_password("not-a-real-password", config_.password_iterations)) {}

HttpResponse ApiService::handle(const HttpRequest& request) {
    try {
        if (!request.path.starts_with(kApiBase)) throw RouteNotFound{};
        return dispatch(request, std::string_view(request.path).substr(kApiBase.size()));
    } catch (const Unauthorized&) {
        return error(401, "unauthorized", std::string(kTokenFailureMessage));
    } catch (const Forbidden&) {
        return error(403, "forbidden", "operator role required");
    } catch (const RateLimited&) {
        return error(429, "rate_limited", "too many requests; limit is per token per minute");
    } catch (const RouteNotFound&) {
        return error(404, "not_found", "no such endpoint");
    } catch (const MethodNotAllowed&) {
        return error(405, "method_not_allowed", "method not allowed on this endpoint");
    } catch (const OutOfRangeError& e) {
        return error(422, "out_of_range", e.what(), e.field());
    } catch (const BatchTooLargeError& e) {
        return error(400, "batch_too_large", e.what(), e.field());
    } catch (const ValidationError& e) {
        return error(400, "validation_failed", e.what(), e.field());
    } catch (const ConflictError& e) {
        return error(409, "conflict", e.what(), e.field());
    } catch (const NotFoundError& e) {
        return error(404, "not_found", e.what());
    } catch (const std::exception& e) {
        std::cerr << "internal error on " << request.method << " " << request.path << ": " << e.what() << "\n";
        return error(500, "internal", "internal server error");
    }
}

HttpResponse ApiService::dispatch(const HttpRequest& request, std::string_view route) {
    const auto& method = request.method;
    auto only = [&](std::string_view allowed) {
        if (method != allowed) throw MethodNotAllowed{};
    };

    if (route == "/healthz") {
        only("GET");
        return do_healthz();
    }
    if (route == "/register") {
        only("POST");
        return do_register(request);
    }
    if (route == "/login") {
        only("POST");
        return do_login(request);
    }

    // Everything below requires a session. Resolve the route first so that
    // unknown paths are 404 rather than 401.
    constexpr std::string_view kCasesPrefix = "/cases/";
    constexpr std::string_view kLocationSuffix = "/location";
    std::optional<std::string> case_id;
    if (route.starts_with(kCasesPrefix) && route.ends_with(kLocationSuffix) &&
        route.size() > kCasesPrefix.size() + kLocationSuffix.size()) {
        case_id = std::string(route.substr(kCasesPrefix.size(),
                                           route.size() - kCasesPrefix.size() - kLocationSuffix.size()));
        if (case_id->find('/') != std::string::npos) throw RouteNotFound{};
    }

    static const std::set<std::string_view> kAuthenticated{
        "/logout", "/symptom-check", "/cases", "/locations", "/papaya-feedback", "/map/markers", "/map/hotspots",
        "/map/infection-sites"};
    if (!case_id && !kAuthenticated.contains(route)) throw RouteNotFound{};

    Session session = authenticate(request);
    if (!limiter_.allow(store::sha256_hex(session.token), clock_())) throw RateLimited{};

    if (case_id) {
        only("PATCH");
        return do_attach_location(session, request, *case_id);
    }
    if (route == "/logout") {
        only("POST");
        return do_logout(session);
    }
    if (route == "/symptom-check") {
        only("POST");
        return do_symptom_check(session, request);
    }
    if (route == "/cases") {
        only("POST");
        return do_report_case(session, request);
    }
    if (route == "/locations") {
        only("POST");
        return do_upload_locations(session, request);
    }
    if (route == "/papaya-feedback") {
        only("POST");
        return do_papaya_feedback(session, request);
    }
    if (route == "/map/markers") {
        only("GET");
        return do_map_markers(session, request);
    }
    if (route == "/map/hotspots") {
        only("GET");
        return do_map_hotspots(session, request);
    }
    only("GET");
    return do_infection_sites(session, request);
}

ApiService::Session ApiService::authenticate(const HttpRequest& request) {
    constexpr std::string_view kBearer = "Bearer ";
    if (!request.authorization) throw Unauthorized{};
    std::string_view header = *request.authorization;
    if (!header.starts_with(kBearer)) throw Unauthorized{};
    std::string token(header.substr(kBearer.size()));
    if (!is_hex_token(token)) throw Unauthorized{};
    auto found = store_.lookup_token(token, clock_());
    if (!found) throw Unauthorized{};
    auto user = store_.get_user(found->user_id);
    if (!user) throw Unauthorized{};
    return {std::move(token), std::move(*user)};
}

HttpResponse ApiService::do_healthz() const { return respond(200, json(HealthResponse{"ok", config_.version})); }

HttpResponse ApiService::do_register(const HttpRequest& request) {
    auto body = parse_body<RegisterRequest>(request);
    const auto now = clock_();

    UserProfile profile;
    profile.name = body.name;
    profile.email = normalize_email(body.email);
    profile.date_of_birth = body.date_of_birth;
    profile.gender = body.gender;
    profile.height_cm = body.height_cm;
    profile.weight_kg = body.weight_kg;
    profile.created_at = now;
    profile.role = Role::Patient;
    validate_profile(profile, date_of(now));
    if (body.password.size() < kMinPasswordLength)
        throw ValidationError("password", "password must be at least 8 characters");
    if (body.password.size() > 1024) throw ValidationError("password", "password is too long");
    if (store_.get_user_by_email(profile.email)) throw ConflictError("email", "email already registered");

    profile.password_digest = hash_password(body.password, config_.password_iterations);
    auto id = store_.create_user(std::move(profile));
    return respond(201, json(RegisterResponse{id}));
}

HttpResponse ApiService::do_login(const HttpRequest& request) {
    auto body = parse_body<LoginRequest>(request);
    auto user = store_.get_user_by_email(body.email);
    // Unknown emails still pay for one digest so both failures look alike.
    const bool ok = verify_password(body.password, user ? user->password_digest : dummy_digest_) && user.has_value();
    if (!ok) return error(401, "unauthorized", std::string(kLoginFailureMessage));

    const auto now = clock_();
    store::AuthToken token{store::random_hex(32), user->user_id, now, now + config_.token_lifetime};
    store_.create_token(token);
    return respond(200, json(LoginResponse{token.token, token.expires_at}));
}

HttpResponse ApiService::do_logout(const Session& session) {
    store_.revoke_token(session.token);
    return respond(200, json{{"revoked", true}});
}

HttpResponse ApiService::do_symptom_check(const Session& session, const HttpRequest& request) {
    auto body = parse_body<SymptomCheckRequest>(request);
    auto result = classify_symptoms(body.symptoms, clock_());
    store_.insert_check_event({session.user.user_id, result.symptoms, result.likely_dengue, result.evaluated_at});
    return respond(200, json(SymptomCheckResponse{result.likely_dengue, result.advice, result.evaluated_at}));
}

HttpResponse ApiService::do_report_case(const Session& session, const HttpRequest& request) {
    auto body = parse_body<CaseRequest>(request);
    const auto now = clock_();
    const auto reported_at = body.reported_at.value_or(now);
    if (is_future(reported_at, now)) throw ValidationError("reported_at", "reported_at must not be in the future");

    store::CaseReport report{"", session.user.user_id, body.location, reported_at};
    auto id = store_.insert_case(report, config_.dedup_window);
    return respond(201, json(CaseResponse{id, !body.location.has_value()}));
}

HttpResponse ApiService::do_attach_location(const Session& session, const HttpRequest& request,
                                            const std::string& case_id) {
    auto existing = store_.get_case(case_id);
    if (!existing || existing->user_id != session.user.user_id) throw NotFoundError("unknown case");
    auto body = parse_body<LocationPatchRequest>(request);
    auto updated = store_.attach_location(case_id, body.location);
    return respond(200, json(CaseResponse{updated.case_id, updated.location_pending()}));
}

HttpResponse ApiService::do_upload_locations(const Session& session, const HttpRequest& request) {
    auto body = parse_body<LocationsRequest>(request);
    std::vector<geo::LocationSample> samples;
    samples.reserve(body.samples.size());
    for (const auto& s : body.samples) samples.push_back({{s.latitude, s.longitude}, s.recorded_at});
    auto result = store_.append_samples(session.user.user_id, samples, clock_());
    return respond(200, json(LocationsResponse{result.accepted, result.rejected}));
}

HttpResponse ApiService::do_papaya_feedback(const Session& session, const HttpRequest& request) {
    auto body = parse_body<FeedbackRequest>(request);
    PlateletFeedback fb{session.user.user_id, body.platelet_before, body.platelet_after, body.before_date,
                        body.after_date, clock_()};
    auto outcome = evaluate_feedback(fb);
    store_.insert_feedback(fb);
    return respond(200, json(FeedbackResponse{outcome.outcome, outcome.delta}));
}

HttpResponse ApiService::do_map_markers(const Session& session, const HttpRequest& request) {
    require_operator(session.user);
    geo::BoundingBox box{query_double(request, "min_lat", -90.0), query_double(request, "min_lon", -180.0),
                         query_double(request, "max_lat", 90.0), query_double(request, "max_lon", 180.0)};
    geo::validate(box);
    const auto from = query_time(request, "from", Timestamp::min());
    const auto to = query_time(request, "to", Timestamp::max());
    if (from > to) throw ValidationError("from", "from must not be after to");

    MarkersResponse out;
    for (const auto& c : store_.query_cases(box, from, to))
        out.markers.push_back({c.case_id, c.point->latitude, c.point->longitude, c.reported_at});
    return respond(200, json(out));
}

HttpResponse ApiService::do_map_hotspots(const Session& session, const HttpRequest& request) {
    require_operator(session.user);
    const double radius = query_double(request, "radius_m", config_.hotspot_radius_m);
    const std::size_t min_cases = query_count(request, "min_cases", config_.min_cases);

    std::vector<geo::CasePoint> points;
    for (const auto& c : store_.all_cases())
        if (c.point) points.push_back({c.case_id, *c.point});
    return respond(200, json(HotspotsResponse{geo::cluster_hotspots(points, radius, min_cases)}));
}

HttpResponse ApiService::do_infection_sites(const Session& session, const HttpRequest& request) {
    require_operator(session.user);
    const double radius = query_double(request, "radius_m", config_.site_radius_m);

    std::set<std::string> confirmed;
    for (const auto& c : store_.all_cases()) confirmed.insert(c.user_id);
    std::vector<geo::LocationTrace> traces;
    for (const auto& user : confirmed) traces.push_back(store_.get_trace(user));
    std::vector<std::string> users(confirmed.begin(), confirmed.end());
    return respond(200, json(SitesResponse{geo::infer_infection_sites(traces, users, radius)}));
}

}  // namespace dengue::api
