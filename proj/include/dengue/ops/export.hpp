#pragma once

#include <string>

#include <json.hpp>

#include "dengue/core/time.hpp"
#include "dengue/geo/clustering.hpp"
#include "dengue/store/store.hpp"

namespace dengue::ops {

struct ExportQuery {
    geo::BoundingBox bbox = geo::BoundingBox::world();
    Timestamp from = Timestamp::min();
    Timestamp to = Timestamp::max();
    double hotspot_radius_m = geo::kDefaultHotspotRadiusM;
    std::size_t min_cases = geo::kDefaultMinCases;
    bool include_hotspots = true;
};

/// RFC 7946 FeatureCollection: one Point per located case in the query
/// ({kind:"case", case_id, reported_at}), then one Point per hotspot among
/// those cases ({kind:"hotspot", member_count, radius_m}).
/// Coordinates are [longitude, latitude].
nlohmann::ordered_json export_geojson(const store::Store& store, const ExportQuery& query);

/// "case_id,latitude,longitude,reported_at" rows for the same case set.
std::string export_csv(const store::Store& store, const ExportQuery& query);

/// Parses "min_lat,min_lon,max_lat,max_lon". Throws ValidationError("bbox").
geo::BoundingBox parse_bbox(const std::string& text);

}  // namespace dengue::ops
