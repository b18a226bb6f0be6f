#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dengue/core/time.hpp"
#include "dengue/geo/geo_point.hpp"
#include "dengue/geo/trace.hpp"

namespace dengue::geo {

inline constexpr double kDefaultHotspotRadiusM = 200.0;
inline constexpr double kDefaultSiteRadiusM = 100.0;
inline constexpr std::size_t kDefaultMinCases = 3;

/// Connected components of the proximity graph over `points`: an edge joins
/// two points iff haversine_m <= radius_m. Each component is a sorted list of
/// indices into `points`; components are ordered by their smallest index.
///
/// Candidate pairs come from a lat/lon grid whose cells are at least one
/// radius wide, so results are identical to an all-pairs scan.
std::vector<std::vector<std::size_t>> proximity_components(std::span<const GeoPoint> points, double radius_m);

struct CasePoint {
    std::string case_id;
    GeoPoint point;

    friend bool operator==(const CasePoint&, const CasePoint&) = default;
};

struct Hotspot {
    GeoPoint centroid;
    std::vector<std::string> case_ids;  // sorted
    double radius_m = 0.0;              // max distance centroid -> member
    std::size_t member_count = 0;

    friend bool operator==(const Hotspot&, const Hotspot&) = default;
};

/// Components with at least `min_cases` members. Output is independent of
/// input order: members are sorted and hotspots are ordered by first case id.
/// Throws ValidationError for radius_m <= 0, min_cases < 2 or duplicate ids.
std::vector<Hotspot> cluster_hotspots(std::span<const CasePoint> cases, double radius_m, std::size_t min_cases);

struct InfectionSite {
    GeoPoint centroid;
    std::vector<std::string> contributing_users;  // sorted, at least two
    std::size_t sample_count = 0;
    Timestamp first_seen{};
    Timestamp last_seen{};

    friend bool operator==(const InfectionSite&, const InfectionSite&) = default;
};

/// Places visited by two or more confirmed users, regardless of when.
/// Only traces whose user is in `confirmed_users` contribute.
/// Throws ValidationError for radius_m <= 0.
std::vector<InfectionSite> infer_infection_sites(std::span<const LocationTrace> traces,
                                                 std::span<const std::string> confirmed_users, double radius_m);

}  // namespace dengue::geo
