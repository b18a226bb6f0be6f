#pragma once

// Random valid wire payloads and a lossless round-trip check for each DTO.

#include <random>
#include <string>

#include "dengue/api/wire.hpp"

namespace testing {

namespace wire = dengue::api;

class WireGen {
public:
    explicit WireGen(std::uint64_t seed) : rng_(seed) {}

    std::string text(std::size_t max_len = 24) {
        static constexpr std::string_view kAlphabet =
            "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 _-.@\"\\/\té";
        std::uniform_int_distribution<std::size_t> len(1, max_len), pick(0, kAlphabet.size() - 1);
        std::string s;
        for (std::size_t n = len(rng_); s.size() < n;) {
            char c = kAlphabet[pick(rng_)];
            if (static_cast<unsigned char>(c) >= 0x80) {
                s += "é";  // keep UTF-8 well formed
                continue;
            }
            s += c;
        }
        return s;
    }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
    }
    bool coin() { return integer(0, 1) == 1; }
    dengue::Timestamp time() { return dengue::from_unix_ms(integer(0, 4'102'444'799'999)); }
    dengue::Date date() { return dengue::date_of(time()); }
    dengue::geo::GeoPoint point() { return {real(-90, 90), real(-180, 180)}; }
    dengue::SymptomSet symptoms() { return dengue::SymptomSet::from_mask(static_cast<std::uint16_t>(integer(0, 511))); }
    std::vector<std::string> ids() {
        std::vector<std::string> v;
        for (auto n = integer(0, 6); n > 0; --n) v.push_back(text(12));
        return v;
    }

    wire::RegisterRequest register_request() {
        static constexpr dengue::Gender kGenders[] = {dengue::Gender::Female, dengue::Gender::Male,
                                                      dengue::Gender::Other};
        return {text(), text(), text(), date(), kGenders[integer(0, 2)], real(30, 272), real(1, 650)};
    }
    wire::CaseRequest case_request() {
        wire::CaseRequest r;
        if (coin()) r.location = point();
        if (coin()) r.reported_at = time();
        return r;
    }
    wire::LocationsRequest locations_request() {
        wire::LocationsRequest r;
        for (auto n = integer(0, 30); n > 0; --n) {
            auto p = point();
            r.samples.push_back({p.latitude, p.longitude, time()});
        }
        return r;
    }
    wire::LocationsResponse locations_response() {
        wire::LocationsResponse r{static_cast<std::size_t>(integer(0, 480)), {}};
        for (auto n = integer(0, 5); n > 0; --n) r.rejected.push_back(static_cast<std::size_t>(integer(0, 479)));
        return r;
    }
    wire::FeedbackRequest feedback_request() {
        return {integer(dengue::kMinPlatelets, dengue::kMaxPlatelets),
                integer(dengue::kMinPlatelets, dengue::kMaxPlatelets), date(), date()};
    }
    wire::FeedbackResponse feedback_response() {
        static constexpr dengue::Outcome kOutcomes[] = {dengue::Outcome::Improved, dengue::Outcome::Unchanged,
                                                        dengue::Outcome::Worsened};
        return {kOutcomes[integer(0, 2)], integer(-2'000'000, 2'000'000)};
    }
    wire::MarkersResponse markers_response() {
        wire::MarkersResponse r;
        for (auto n = integer(0, 8); n > 0; --n) {
            auto p = point();
            r.markers.push_back({text(), p.latitude, p.longitude, time()});
        }
        return r;
    }
    wire::HotspotsResponse hotspots_response() {
        wire::HotspotsResponse r;
        for (auto n = integer(0, 4); n > 0; --n) {
            dengue::geo::Hotspot h{point(), ids(), real(0, 5000), 0};
            h.member_count = h.case_ids.size();
            r.hotspots.push_back(std::move(h));
        }
        return r;
    }
    wire::SitesResponse sites_response() {
        wire::SitesResponse r;
        for (auto n = integer(0, 4); n > 0; --n)
            r.sites.push_back({point(), ids(), static_cast<std::size_t>(integer(2, 900)), time(), time()});
        return r;
    }
    wire::ApiError api_error() {
        wire::ApiError e{text(), text(), std::nullopt};
        if (coin()) e.field = text();
        return e;
    }

private:
    std::mt19937_64 rng_;
};

/// serialize -> text -> parse -> decode equals the input.
template <typename T>
bool round_trips(const T& value) {
    auto text = nlohmann::json(value).dump();
    return nlohmann::json::parse(text).get<T>() == value;
}

inline bool round_trips(const wire::HotspotsResponse& value) {
    auto text = nlohmann::json(value).dump();
    return nlohmann::json::parse(text).get<wire::HotspotsResponse>().hotspots == value.hotspots;
}

inline bool round_trips(const wire::SitesResponse& value) {
    auto text = nlohmann::json(value).dump();
    return nlohmann::json::parse(text).get<wire::SitesResponse>().sites == value.sites;
}

/// One round of every request and response DTO. Returns the name of the
/// first type that failed, or an empty string.
inline std::string round_trip_all(WireGen& g) {
    if (!round_trips(g.register_request())) return "RegisterRequest";
    if (!round_trips(wire::RegisterResponse{g.text()})) return "RegisterResponse";
    if (!round_trips(wire::LoginRequest{g.text(), g.text()})) return "LoginRequest";
    if (!round_trips(wire::LoginResponse{g.text(64), g.time()})) return "LoginResponse";
    if (!round_trips(wire::SymptomCheckRequest{g.symptoms()})) return "SymptomCheckRequest";
    if (!round_trips(wire::SymptomCheckResponse{g.coin(), g.text(200), g.time()})) return "SymptomCheckResponse";
    if (!round_trips(g.case_request())) return "CaseRequest";
    if (!round_trips(wire::CaseResponse{g.text(), g.coin()})) return "CaseResponse";
    if (!round_trips(wire::LocationPatchRequest{g.point()})) return "LocationPatchRequest";
    if (!round_trips(g.locations_request())) return "LocationsRequest";
    if (!round_trips(g.locations_response())) return "LocationsResponse";
    if (!round_trips(g.feedback_request())) return "FeedbackRequest";
    if (!round_trips(g.feedback_response())) return "FeedbackResponse";
    if (!round_trips(g.markers_response())) return "MarkersResponse";
    if (!round_trips(g.hotspots_response())) return "HotspotsResponse";
    if (!round_trips(g.sites_response())) return "SitesResponse";
    if (!round_trips(wire::HealthResponse{g.text(), g.text()})) return "HealthResponse";
    if (!round_trips(g.api_error())) return "ApiError";
    return {};
}

}  // namespace testing
