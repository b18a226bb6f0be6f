#include "dengue/api/wire.hpp"

#include <cmath>

#include "dengue/core/errors.hpp"
#include "dengue/geo/geo_point.hpp"

namespace dengue::api {

namespace {

const json& require_object(const json& j) {
    if (!j.is_object()) throw ValidationError("", "request body must be a JSON object");
    return j;
}

const json& require_field(const json& j, const std::string& key, const std::string& field) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) throw ValidationError(field, field + " is required");
    return *it;
}

std::string get_string(const json& j, const std::string& key, const std::string& field) {
    const auto& v = require_field(j, key, field);
    if (!v.is_string()) throw ValidationError(field, field + " must be a string");
    return v.get<std::string>();
}

std::string get_string(const json& j, const std::string& key) { return get_string(j, key, key); }

double get_number(const json& j, const std::string& key, const std::string& field) {
    const auto& v = require_field(j, key, field);
    if (!v.is_number()) throw ValidationError(field, field + " must be a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError(field, field + " must be finite");
    return d;
}

double get_number(const json& j, const std::string& key) { return get_number(j, key, key); }

std::int64_t get_integer(const json& j, const std::string& key) {
    const auto& v = require_field(j, key, key);
    if (v.is_number_unsigned()) {
        auto u = v.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(INT64_MAX)) throw ValidationError(key, key + " is too large");
        return static_cast<std::int64_t>(u);
    }
    if (!v.is_number_integer()) throw ValidationError(key, key + " must be an integer");
    return v.get<std::int64_t>();
}

std::size_t get_count(const json& j, const std::string& key) {
    auto v = get_integer(j, key);
    if (v < 0) throw ValidationError(key, key + " must not be negative");
    return static_cast<std::size_t>(v);
}

bool get_bool(const json& j, const std::string& key) {
    const auto& v = require_field(j, key, key);
    if (!v.is_boolean()) throw ValidationError(key, key + " must be a boolean");
    return v.get<bool>();
}

Timestamp get_timestamp(const json& j, const std::string& key, const std::string& field) {
    auto text = get_string(j, key, field);
    auto t = parse_rfc3339(text);
    if (!t) throw ValidationError(field, field + " must be an RFC 3339 timestamp");
    return *t;
}

Timestamp get_timestamp(const json& j, const std::string& key) { return get_timestamp(j, key, key); }

Date get_date(const json& j, const std::string& key) {
    auto d = parse_date(get_string(j, key));
    if (!d) throw ValidationError(key, key + " must be a YYYY-MM-DD date");
    return *d;
}

bool present(const json& j, const std::string& key) {
    auto it = j.find(key);
    return it != j.end() && !it->is_null();
}

std::vector<std::string> get_string_array(const json& j, const std::string& key) {
    const auto& v = require_field(j, key, key);
    if (!v.is_array()) throw ValidationError(key, key + " must be an array");
    std::vector<std::string> out;
    for (const auto& item : v) {
        if (!item.is_string()) throw ValidationError(key, key + " must contain only strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

/// Range-checked point from "latitude"/"longitude" members, field names prefixed.
geo::GeoPoint get_point(const json& j, const std::string& prefix = "") {
    double lat = get_number(j, "latitude", prefix + "latitude");
    double lon = get_number(j, "longitude", prefix + "longitude");
    if (lat < -90.0 || lat > 90.0) throw OutOfRangeError(prefix + "latitude", "latitude must be within [-90, 90]");
    if (lon < -180.0 || lon > 180.0)
        throw OutOfRangeError(prefix + "longitude", "longitude must be within [-180, 180]");
    return {lat, lon};
}

}  // namespace

void to_json(json& j, const RegisterRequest& v) {
    j = json{{"name", v.name},
             {"email", v.email},
             {"password", v.password},
             {"date_of_birth", format_date(v.date_of_birth)},
             {"gender", to_string(v.gender)},
             {"height_cm", v.height_cm},
             {"weight_kg", v.weight_kg}};
}

void from_json(const json& j, RegisterRequest& v) {
    require_object(j);
    v.name = get_string(j, "name");
    v.email = get_string(j, "email");
    v.password = get_string(j, "password");
    v.date_of_birth = get_date(j, "date_of_birth");
    auto gender = gender_from_string(get_string(j, "gender"));
    if (!gender) throw ValidationError("gender", "gender must be one of female, male, other");
    v.gender = *gender;
    v.height_cm = get_number(j, "height_cm");
    v.weight_kg = get_number(j, "weight_kg");
}

void to_json(json& j, const RegisterResponse& v) { j = json{{"user_id", v.user_id}}; }
void from_json(const json& j, RegisterResponse& v) { v.user_id = get_string(require_object(j), "user_id"); }

void to_json(json& j, const LoginRequest& v) { j = json{{"email", v.email}, {"password", v.password}}; }

void from_json(const json& j, LoginRequest& v) {
    require_object(j);
    v.email = get_string(j, "email");
    v.password = get_string(j, "password");
}

void to_json(json& j, const LoginResponse& v) {
    j = json{{"token", v.token}, {"expires_at", format_rfc3339(v.expires_at)}};
}

void from_json(const json& j, LoginResponse& v) {
    require_object(j);
    v.token = get_string(j, "token");
    v.expires_at = get_timestamp(j, "expires_at");
}

void to_json(json& j, const SymptomCheckRequest& v) {
    json codes = json::array();
    for (auto s : v.symptoms.to_vector()) codes.push_back(to_code(s));
    j = json{{"symptoms", codes}};
}

void from_json(const json& j, SymptomCheckRequest& v) {
    require_object(j);
    v.symptoms = {};
    for (const auto& code : get_string_array(j, "symptoms")) {
        auto s = symptom_from_code(code);
        if (!s) throw ValidationError("symptoms", "unknown symptom code '" + code + "'");
        v.symptoms.insert(*s);
    }
}

void to_json(json& j, const SymptomCheckResponse& v) {
    j = json{{"likely_dengue", v.likely_dengue},
             {"advice", v.advice},
             {"evaluated_at", format_rfc3339(v.evaluated_at)}};
}

void from_json(const json& j, SymptomCheckResponse& v) {
    require_object(j);
    v.likely_dengue = get_bool(j, "likely_dengue");
    v.advice = get_string(j, "advice");
    v.evaluated_at = get_timestamp(j, "evaluated_at");
}

void to_json(json& j, const CaseRequest& v) {
    j = json::object();
    if (v.location) {
        j["latitude"] = v.location->latitude;
        j["longitude"] = v.location->longitude;
    }
    if (v.reported_at) j["reported_at"] = format_rfc3339(*v.reported_at);
}

void from_json(const json& j, CaseRequest& v) {
    require_object(j);
    const bool has_lat = present(j, "latitude");
    const bool has_lon = present(j, "longitude");
    if (has_lat != has_lon) {
        auto missing = has_lat ? "longitude" : "latitude";
        throw ValidationError(missing, "latitude and longitude must be given together");
    }
    v.location = has_lat ? std::optional(get_point(j)) : std::nullopt;
    v.reported_at = present(j, "reported_at") ? std::optional(get_timestamp(j, "reported_at")) : std::nullopt;
}

void to_json(json& j, const CaseResponse& v) {
    j = json{{"case_id", v.case_id}, {"location_pending", v.location_pending}};
}

void from_json(const json& j, CaseResponse& v) {
    require_object(j);
    v.case_id = get_string(j, "case_id");
    v.location_pending = get_bool(j, "location_pending");
}

void to_json(json& j, const LocationPatchRequest& v) {
    j = json{{"latitude", v.location.latitude}, {"longitude", v.location.longitude}};
}

void from_json(const json& j, LocationPatchRequest& v) { v.location = get_point(require_object(j)); }

void to_json(json& j, const SampleDto& v) {
    j = json{{"latitude", v.latitude}, {"longitude", v.longitude}, {"recorded_at", format_rfc3339(v.recorded_at)}};
}

void to_json(json& j, const LocationsRequest& v) { j = json{{"samples", v.samples}}; }

void from_json(const json& j, LocationsRequest& v) {
    require_object(j);
    const auto& arr = require_field(j, "samples", "samples");
    if (!arr.is_array()) throw ValidationError("samples", "samples must be an array");
    if (arr.size() > kMaxSamplesPerUpload)
        throw BatchTooLargeError("samples", "at most 480 samples may be uploaded per request");
    v.samples.clear();
    v.samples.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto prefix = "samples[" + std::to_string(i) + "].";
        if (!arr[i].is_object()) throw ValidationError("samples[" + std::to_string(i) + "]", "sample must be an object");
        SampleDto s;
        s.latitude = get_number(arr[i], "latitude", prefix + "latitude");
        s.longitude = get_number(arr[i], "longitude", prefix + "longitude");
        if (!geo::is_valid({s.latitude, s.longitude}))
            throw ValidationError(prefix + "latitude", "sample coordinates outside WGS84 range");
        s.recorded_at = get_timestamp(arr[i], "recorded_at", prefix + "recorded_at");
        v.samples.push_back(s);
    }
}

void to_json(json& j, const LocationsResponse& v) {
    j = json{{"accepted_count", v.accepted_count}, {"rejected", v.rejected}};
}

void from_json(const json& j, LocationsResponse& v) {
    require_object(j);
    v.accepted_count = get_count(j, "accepted_count");
    const auto& arr = require_field(j, "rejected", "rejected");
    if (!arr.is_array()) throw ValidationError("rejected", "rejected must be an array");
    v.rejected.clear();
    for (const auto& item : arr) {
        if (!item.is_number_unsigned()) throw ValidationError("rejected", "rejected must hold indices");
        v.rejected.push_back(item.get<std::size_t>());
    }
}

void to_json(json& j, const FeedbackRequest& v) {
    j = json{{"platelet_before", v.platelet_before},
             {"platelet_after", v.platelet_after},
             {"before_date", format_date(v.before_date)},
             {"after_date", format_date(v.after_date)}};
}

void from_json(const json& j, FeedbackRequest& v) {
    require_object(j);
    v.platelet_before = get_integer(j, "platelet_before");
    v.platelet_after = get_integer(j, "platelet_after");
    v.before_date = get_date(j, "before_date");
    v.after_date = get_date(j, "after_date");
}

void to_json(json& j, const FeedbackResponse& v) { j = json{{"outcome", to_string(v.outcome)}, {"delta", v.delta}}; }

void from_json(const json& j, FeedbackResponse& v) {
    require_object(j);
    auto outcome = outcome_from_string(get_string(j, "outcome"));
    if (!outcome) throw ValidationError("outcome", "unknown outcome");
    v.outcome = *outcome;
    v.delta = get_integer(j, "delta");
}

void to_json(json& j, const Marker& v) {
    j = json{{"case_id", v.case_id},
             {"latitude", v.latitude},
             {"longitude", v.longitude},
             {"reported_at", format_rfc3339(v.reported_at)}};
}

void to_json(json& j, const MarkersResponse& v) { j = json{{"markers", v.markers}}; }

void from_json(const json& j, MarkersResponse& v) {
    require_object(j);
    const auto& arr = require_field(j, "markers", "markers");
    if (!arr.is_array()) throw ValidationError("markers", "markers must be an array");
    v.markers.clear();
    for (const auto& m : arr) {
        auto p = get_point(require_object(m));
        v.markers.push_back({get_string(m, "case_id"), p.latitude, p.longitude, get_timestamp(m, "reported_at")});
    }
}

void to_json(json& j, const HotspotsResponse& v) {
    json arr = json::array();
    for (const auto& h : v.hotspots)
        arr.push_back({{"latitude", h.centroid.latitude},
                       {"longitude", h.centroid.longitude},
                       {"case_ids", h.case_ids},
                       {"radius_m", h.radius_m},
                       {"member_count", h.member_count}});
    j = json{{"hotspots", arr}};
}

void from_json(const json& j, HotspotsResponse& v) {
    require_object(j);
    const auto& arr = require_field(j, "hotspots", "hotspots");
    if (!arr.is_array()) throw ValidationError("hotspots", "hotspots must be an array");
    v.hotspots.clear();
    for (const auto& item : arr) {
        geo::Hotspot h;
        h.centroid = get_point(require_object(item));
        h.case_ids = get_string_array(item, "case_ids");
        h.radius_m = get_number(item, "radius_m");
        h.member_count = get_count(item, "member_count");
        v.hotspots.push_back(std::move(h));
    }
}

void to_json(json& j, const SitesResponse& v) {
    json arr = json::array();
    for (const auto& s : v.sites)
        arr.push_back({{"latitude", s.centroid.latitude},
                       {"longitude", s.centroid.longitude},
                       {"contributing_users", s.contributing_users},
                       {"sample_count", s.sample_count},
                       {"first_seen", format_rfc3339(s.first_seen)},
                       {"last_seen", format_rfc3339(s.last_seen)}});
    j = json{{"sites", arr}};
}

void from_json(const json& j, SitesResponse& v) {
    require_object(j);
    const auto& arr = require_field(j, "sites", "sites");
    if (!arr.is_array()) throw ValidationError("sites", "sites must be an array");
    v.sites.clear();
    for (const auto& item : arr) {
        geo::InfectionSite s;
        s.centroid = get_point(require_object(item));
        s.contributing_users = get_string_array(item, "contributing_users");
        s.sample_count = get_count(item, "sample_count");
        s.first_seen = get_timestamp(item, "first_seen");
        s.last_seen = get_timestamp(item, "last_seen");
        v.sites.push_back(std::move(s));
    }
}

void to_json(json& j, const HealthResponse& v) { j = json{{"status", v.status}, {"version", v.version}}; }

void from_json(const json& j, HealthResponse& v) {
    require_object(j);
    v.status = get_string(j, "status");
    v.version = get_string(j, "version");
}

void to_json(json& j, const ApiError& v) {
    json inner{{"code", v.code}, {"message", v.message}};
    if (v.field) inner["field"] = *v.field;
    j = json{{"error", inner}};
}

void from_json(const json& j, ApiError& v) {
    const auto& inner = require_field(require_object(j), "error", "error");
    require_object(inner);
    v.code = get_string(inner, "code");
    v.message = get_string(inner, "message");
    v.field = present(inner, "field") ? std::optional(get_string(inner, "field")) : std::nullopt;
}

}  // namespace dengue::api
