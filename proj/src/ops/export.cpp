#include "dengue/ops/export.hpp"

#include <charconv>
#include <sstream>

#include "dengue/core/errors.hpp"

namespace dengue::ops {

namespace {

using nlohmann::ordered_json;

ordered_json point_geometry(const geo::GeoPoint& p) {
    return ordered_json{{"type", "Point"}, {"coordinates", {p.longitude, p.latitude}}};
}

std::string shortest(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

}  // namespace

ordered_json export_geojson(const store::Store& store, const ExportQuery& query) {
    geo::validate(query.bbox);
    const auto cases = store.query_cases(query.bbox, query.from, query.to);

    ordered_json features = ordered_json::array();
    std::vector<geo::CasePoint> points;
    points.reserve(cases.size());
    for (const auto& c : cases) {
        features.push_back({{"type", "Feature"},
                            {"geometry", point_geometry(*c.point)},
                            {"properties",
                             {{"kind", "case"}, {"case_id", c.case_id}, {"reported_at", format_rfc3339(c.reported_at)}}}});
        points.push_back({c.case_id, *c.point});
    }
    if (query.include_hotspots) {
        for (const auto& h : geo::cluster_hotspots(points, query.hotspot_radius_m, query.min_cases))
            features.push_back({{"type", "Feature"},
                                {"geometry", point_geometry(h.centroid)},
                                {"properties",
                                 {{"kind", "hotspot"}, {"member_count", h.member_count}, {"radius_m", h.radius_m}}}});
    }
    return ordered_json{{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

std::string export_csv(const store::Store& store, const ExportQuery& query) {
    geo::validate(query.bbox);
    std::ostringstream out;
    out << "case_id,latitude,longitude,reported_at\n";
    for (const auto& c : store.query_cases(query.bbox, query.from, query.to))
        out << c.case_id << ',' << shortest(c.point->latitude) << ',' << shortest(c.point->longitude) << ','
            << format_rfc3339(c.reported_at) << '\n';
    return out.str();
}

geo::BoundingBox parse_bbox(const std::string& text) {
    double v[4];
    std::size_t start = 0;
    for (int i = 0; i < 4; ++i) {
        auto end = text.find(',', start);
        if ((i < 3) != (end != std::string::npos)) throw ValidationError("bbox", "bbox must be min_lat,min_lon,max_lat,max_lon");
        auto part = text.substr(start, i < 3 ? end - start : std::string::npos);
        auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v[i]);
        if (ec != std::errc() || p != part.data() + part.size() || part.empty())
            throw ValidationError("bbox", "bbox must be min_lat,min_lon,max_lat,max_lon");
        start = end + 1;
    }
    geo::BoundingBox box{v[0], v[1], v[2], v[3]};
    geo::validate(box);
    return box;
}

}  // namespace dengue::ops
