#include "dengue/geo/geo_point.hpp"

#include <algorithm>
#include <cmath>

#include "dengue/core/errors.hpp"

namespace dengue::geo {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

bool valid_latitude(double v) { return std::isfinite(v) && v >= -90.0 && v <= 90.0; }
bool valid_longitude(double v) { return std::isfinite(v) && v >= -180.0 && v <= 180.0; }

}  // namespace

bool is_valid(const GeoPoint& p) noexcept { return valid_latitude(p.latitude) && valid_longitude(p.longitude); }

GeoPoint make_point(double latitude, double longitude) {
    if (!valid_latitude(latitude)) throw OutOfRangeError("latitude", "latitude must be within [-90, 90]");
    if (!valid_longitude(longitude)) throw OutOfRangeError("longitude", "longitude must be within [-180, 180]");
    return {latitude, longitude};
}

double haversine_m(const GeoPoint& a, const GeoPoint& b) noexcept {
    if (a == b) return 0.0;
    const double lat1 = a.latitude * kDegToRad;
    const double lat2 = b.latitude * kDegToRad;
    const double sin_dlat = std::sin((lat2 - lat1) / 2.0);
    const double sin_dlon = std::sin((b.longitude - a.longitude) * kDegToRad / 2.0);
    double h = sin_dlat * sin_dlat + std::cos(lat1) * std::cos(lat2) * sin_dlon * sin_dlon;
    h = std::clamp(h, 0.0, 1.0);
    return 2.0 * kEarthRadiusM * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

bool BoundingBox::contains(const GeoPoint& p) const noexcept {
    if (p.latitude < min_lat || p.latitude > max_lat) return false;
    if (crosses_antimeridian()) return p.longitude >= min_lon || p.longitude <= max_lon;
    return p.longitude >= min_lon && p.longitude <= max_lon;
}

void validate(const BoundingBox& box) {
    if (!valid_latitude(box.min_lat) || !valid_latitude(box.max_lat) || !valid_longitude(box.min_lon) ||
        !valid_longitude(box.max_lon))
        throw ValidationError("bbox", "bounding box corners must be valid WGS84 coordinates");
    if (box.min_lat > box.max_lat) throw ValidationError("bbox", "min_lat must not exceed max_lat");
}

namespace detail {

double normalize_longitude(double lon) noexcept {
    while (lon > 180.0) lon -= 360.0;
    while (lon < -180.0) lon += 360.0;
    return lon;
}

}  // namespace detail

}  // namespace dengue::geo
