#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dengue/core/profile.hpp"
#include "dengue/geo/geo_point.hpp"
#include "dengue/geo/trace.hpp"
#include "dengue/store/store.hpp"

namespace dengue::ops {

/// Viti Levu, Fiji.
inline const geo::BoundingBox kVitiLevu{-18.30, 177.25, -17.28, 178.70};

struct OutbreakParams {
    std::uint64_t seed = 42;
    std::size_t users = 60;
    std::size_t cases = 50;  // planted clusters plus uniform background
    geo::BoundingBox bbox = kVitiLevu;
    std::size_t hotspot_count = 3;
    std::size_t cluster_size = 10;
    /// Planted clusters are Gaussian with sigma = hotspot_radius_m / 3.
    double hotspot_radius_m = 150.0;
    /// Share of case-reporting users given a 48-hour trace that includes a
    /// visit to one shared planted site.
    double trace_fraction = 0.2;
    /// Latest report time; reports spread over the 14 days before it.
    Timestamp anchor = *parse_rfc3339("2025-01-01T00:00:00Z");
    /// Minimum spacing between planted cluster centres.
    double min_center_separation_m = 5'000.0;
};

struct PlantedCluster {
    geo::GeoPoint center;
    double sigma_m = 0.0;
    std::size_t size = 0;
};

struct SimulatedOutbreak {
    std::vector<UserProfile> users;
    std::vector<store::CaseReport> cases;
    std::vector<geo::LocationTrace> traces;
    std::vector<PlantedCluster> clusters;
    std::vector<geo::GeoPoint> planted_sites;
};

/// Deterministic for a fixed params value. Throws ValidationError for an
/// invalid bbox, negative background count or fewer users than cases.
SimulatedOutbreak simulate_outbreak(const OutbreakParams& params);

/// Writes users, cases and traces into `store`.
void populate(store::Store& store, const SimulatedOutbreak& outbreak);

/// Planted centres and sites, for scoring hotspot recovery.
nlohmann::ordered_json ground_truth(const OutbreakParams& params, const SimulatedOutbreak& outbreak);

}  // namespace dengue::ops
