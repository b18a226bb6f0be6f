#pragma once

// JSON bodies of the /api/v1 endpoints. Decoding is strict: a missing or
// mistyped field throws ValidationError naming that field, and coordinates
// outside WGS84 throw OutOfRangeError.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dengue/core/feedback.hpp"
#include "dengue/core/profile.hpp"
#include "dengue/core/symptom.hpp"
#include "dengue/core/time.hpp"
#include "dengue/geo/clustering.hpp"

namespace dengue::api {

using json = nlohmann::json;

struct RegisterRequest {
    std::string name;
    std::string email;
    std::string password;
    Date date_of_birth{};
    Gender gender = Gender::Other;
    double height_cm = 0.0;
    double weight_kg = 0.0;
    friend bool operator==(const RegisterRequest&, const RegisterRequest&) = default;
};

struct RegisterResponse {
    std::string user_id;
    friend bool operator==(const RegisterResponse&, const RegisterResponse&) = default;
};

struct LoginRequest {
    std::string email;
    std::string password;
    friend bool operator==(const LoginRequest&, const LoginRequest&) = default;
};

struct LoginResponse {
    std::string token;
    Timestamp expires_at{};
    friend bool operator==(const LoginResponse&, const LoginResponse&) = default;
};

struct SymptomCheckRequest {
    SymptomSet symptoms;
    friend bool operator==(const SymptomCheckRequest&, const SymptomCheckRequest&) = default;
};

struct SymptomCheckResponse {
    bool likely_dengue = false;
    std::string advice;
    Timestamp evaluated_at{};
    friend bool operator==(const SymptomCheckResponse&, const SymptomCheckResponse&) = default;
};

struct CaseRequest {
    std::optional<geo::GeoPoint> location;
    std::optional<Timestamp> reported_at;
    friend bool operator==(const CaseRequest&, const CaseRequest&) = default;
};

struct CaseResponse {
    std::string case_id;
    bool location_pending = false;
    friend bool operator==(const CaseResponse&, const CaseResponse&) = default;
};

struct LocationPatchRequest {
    geo::GeoPoint location;
    friend bool operator==(const LocationPatchRequest&, const LocationPatchRequest&) = default;
};

struct SampleDto {
    double latitude = 0.0;
    double longitude = 0.0;
    Timestamp recorded_at{};
    friend bool operator==(const SampleDto&, const SampleDto&) = default;
};

inline constexpr std::size_t kMaxSamplesPerUpload = 480;

struct LocationsRequest {
    std::vector<SampleDto> samples;
    friend bool operator==(const LocationsRequest&, const LocationsRequest&) = default;
};

struct LocationsResponse {
    std::size_t accepted_count = 0;
    std::vector<std::size_t> rejected;
    friend bool operator==(const LocationsResponse&, const LocationsResponse&) = default;
};

struct FeedbackRequest {
    std::int64_t platelet_before = 0;
    std::int64_t platelet_after = 0;
    Date before_date{};
    Date after_date{};
    friend bool operator==(const FeedbackRequest&, const FeedbackRequest&) = default;
};

struct FeedbackResponse {
    Outcome outcome = Outcome::Unchanged;
    std::int64_t delta = 0;
    friend bool operator==(const FeedbackResponse&, const FeedbackResponse&) = default;
};

struct Marker {
    std::string case_id;
    double latitude = 0.0;
    double longitude = 0.0;
    Timestamp reported_at{};
    friend bool operator==(const Marker&, const Marker&) = default;
};

struct MarkersResponse {
    std::vector<Marker> markers;
    friend bool operator==(const MarkersResponse&, const MarkersResponse&) = default;
};

struct HotspotsResponse {
    std::vector<geo::Hotspot> hotspots;
};

struct SitesResponse {
    std::vector<geo::InfectionSite> sites;
};

struct HealthResponse {
    std::string status;
    std::string version;
    friend bool operator==(const HealthResponse&, const HealthResponse&) = default;
};

struct ApiError {
    std::string code;
    std::string message;
    std::optional<std::string> field;
    friend bool operator==(const ApiError&, const ApiError&) = default;
};

// nlohmann adapters; found by ADL from json::get<T>() and json(value).
void to_json(json& j, const RegisterRequest& v);
void from_json(const json& j, RegisterRequest& v);
void to_json(json& j, const RegisterResponse& v);
void from_json(const json& j, RegisterResponse& v);
void to_json(json& j, const LoginRequest& v);
void from_json(const json& j, LoginRequest& v);
void to_json(json& j, const LoginResponse& v);
void from_json(const json& j, LoginResponse& v);
void to_json(json& j, const SymptomCheckRequest& v);
void from_json(const json& j, SymptomCheckRequest& v);
void to_json(json& j, const SymptomCheckResponse& v);
void from_json(const json& j, SymptomCheckResponse& v);
void to_json(json& j, const CaseRequest& v);
void from_json(const json& j, CaseRequest& v);
void to_json(json& j, const CaseResponse& v);
void from_json(const json& j, CaseResponse& v);
void to_json(json& j, const LocationPatchRequest& v);
void from_json(const json& j, LocationPatchRequest& v);
void to_json(json& j, const SampleDto& v);
void to_json(json& j, const LocationsRequest& v);
void from_json(const json& j, LocationsRequest& v);
void to_json(json& j, const LocationsResponse& v);
void from_json(const json& j, LocationsResponse& v);
void to_json(json& j, const FeedbackRequest& v);
void from_json(const json& j, FeedbackRequest& v);
void to_json(json& j, const FeedbackResponse& v);
void from_json(const json& j, FeedbackResponse& v);
void to_json(json& j, const Marker& v);
void to_json(json& j, const MarkersResponse& v);
void from_json(const json& j, MarkersResponse& v);
void to_json(json& j, const HotspotsResponse& v);
void from_json(const json& j, HotspotsResponse& v);
void to_json(json& j, const SitesResponse& v);
void from_json(const json& j, SitesResponse& v);
void to_json(json& j, const HealthResponse& v);
void from_json(const json& j, HealthResponse& v);
void to_json(json& j, const ApiError& v);
void from_json(const json& j, ApiError& v);

}  // namespace dengue::api
