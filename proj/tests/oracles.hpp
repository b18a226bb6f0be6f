#pragma once

// Independent reference implementations used only by tests. None of these
// call into the code path they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "dengue/core/time.hpp"
#include "dengue/geo/geo_point.hpp"
#include "dengue/geo/trace.hpp"

namespace oracle {

using dengue::Timestamp;
using dengue::geo::GeoPoint;
using dengue::geo::LocationSample;

/// Central angle from unit vectors: atan2(|u x v|, u . v).
inline double great_circle_m(const GeoPoint& a, const GeoPoint& b) {
    constexpr double kR = 6'371'000.0;
    auto vec = [](const GeoPoint& p) {
        const double la = p.latitude * std::numbers::pi / 180.0;
        const double lo = p.longitude * std::numbers::pi / 180.0;
        return std::array<double, 3>{std::cos(la) * std::cos(lo), std::cos(la) * std::sin(lo), std::sin(la)};
    };
    auto u = vec(a);
    auto v = vec(b);
    const double cx = u[1] * v[2] - u[2] * v[1];
    const double cy = u[2] * v[0] - u[0] * v[2];
    const double cz = u[0] * v[1] - u[1] * v[0];
    const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    return kR * std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
}

/// All-pairs connected components by repeated flood fill. `linked(i, j)`
/// decides edges. Each component is a sorted set of indices.
template <typename Linked>
std::set<std::set<std::size_t>> components(std::size_t n, Linked linked) {
    std::vector<int> label(n, -1);
    int next = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (label[s] >= 0) continue;
        std::vector<std::size_t> stack{s};
        label[s] = next;
        while (!stack.empty()) {
            auto i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n; ++j) {
                if (label[j] < 0 && linked(i, j)) {
                    label[j] = next;
                    stack.push_back(j);
                }
            }
        }
        ++next;
    }
    std::vector<std::set<std::size_t>> groups(static_cast<std::size_t>(next));
    for (std::size_t i = 0; i < n; ++i) groups[static_cast<std::size_t>(label[i])].insert(i);
    return {groups.begin(), groups.end()};
}

/// Sort by time, keep one sample per UTC hour (last write wins), keep the
/// newest 480.
inline std::vector<LocationSample> ring_buffer(const std::vector<LocationSample>& appended) {
    std::map<std::int64_t, LocationSample> by_hour;
    for (const auto& s : appended) {
        auto hour = std::chrono::floor<std::chrono::hours>(s.recorded_at).time_since_epoch().count();
        by_hour[hour] = s;
    }
    std::vector<LocationSample> out;
    for (const auto& [h, s] : by_hour) out.push_back(s);
    if (out.size() > 480) out.erase(out.begin(), out.end() - 480);
    return out;
}

/// Linear scan point-in-box, honouring antimeridian boxes.
inline bool in_box(const GeoPoint& p, double min_lat, double min_lon, double max_lat, double max_lon) {
    if (p.latitude < min_lat || p.latitude > max_lat) return false;
    if (min_lon <= max_lon) return p.longitude >= min_lon && p.longitude <= max_lon;
    return p.longitude >= min_lon || p.longitude <= max_lon;
}

}  // namespace oracle
