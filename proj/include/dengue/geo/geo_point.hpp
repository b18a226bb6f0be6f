#pragma once

#include <numbers>
#include <string>

namespace dengue::geo {

/// Mean Earth radius; geodesics are computed on a sphere of this radius.
inline constexpr double kEarthRadiusM = 6'371'000.0;

/// WGS84 coordinate in degrees.
struct GeoPoint {
    double latitude = 0.0;
    double longitude = 0.0;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

bool is_valid(const GeoPoint& p) noexcept;

/// Throws OutOfRangeError naming "latitude" or "longitude".
GeoPoint make_point(double latitude, double longitude);

/// Great-circle distance in metres (haversine form).
double haversine_m(const GeoPoint& a, const GeoPoint& b) noexcept;

/// Lat/lon box. min_lon > max_lon denotes a box that crosses the antimeridian.
struct BoundingBox {
    double min_lat = -90.0;
    double min_lon = -180.0;
    double max_lat = 90.0;
    double max_lon = 180.0;

    static BoundingBox world() { return {}; }

    bool crosses_antimeridian() const noexcept { return min_lon > max_lon; }
    bool contains(const GeoPoint& p) const noexcept;

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Throws ValidationError("bbox") when malformed.
void validate(const BoundingBox& box);

/// Arithmetic-mean centroid. Longitudes are unwrapped onto [0, 360) when the
/// points straddle the antimeridian, then folded back to [-180, 180].
template <typename Range, typename Proj>
GeoPoint mean_centroid(const Range& items, Proj point_of);

namespace detail {
double normalize_longitude(double lon) noexcept;
}

template <typename Range, typename Proj>
GeoPoint mean_centroid(const Range& items, Proj point_of) {
    double lat_sum = 0.0;
    double min_lon = 180.0;
    double max_lon = -180.0;
    std::size_t n = 0;
    for (const auto& item : items) {
        const GeoPoint& p = point_of(item);
        lat_sum += p.latitude;
        min_lon = p.longitude < min_lon ? p.longitude : min_lon;
        max_lon = p.longitude > max_lon ? p.longitude : max_lon;
        ++n;
    }
    if (n == 0) return {};
    const bool unwrap = max_lon - min_lon > 180.0;
    double lon_sum = 0.0;
    for (const auto& item : items) {
        double lon = point_of(item).longitude;
        if (unwrap && lon < 0.0) lon += 360.0;
        lon_sum += lon;
    }
    const double count = static_cast<double>(n);
    return {lat_sum / count, detail::normalize_longitude(lon_sum / count)};
}

}  // namespace dengue::geo
