#include "dengue/geo/clustering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "dengue/core/errors.hpp"

namespace dengue::geo {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kDegToRad = std::numbers::pi / 180.0;
// Widens grid cells slightly so rounding in the distance can never push a
// qualifying pair outside the neighbouring cells.
constexpr double kCellSlack = 1.0 + 1e-6;

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::uint8_t> rank_;
};

/// Uniform lat/lon grid. Rows are at least radius/R radians tall; columns
/// are at least as wide as the largest longitude gap a within-radius pair can
/// have at the highest latitude present. Columns wrap across +/-180.
class GridIndex {
public:
    GridIndex(std::span<const GeoPoint> points, double radius_m) {
        const double angle = radius_m / kEarthRadiusM;
        row_height_ = angle * kRadToDeg * kCellSlack;
        if (row_height_ >= 60.0) {
            rows_ = 1;
            cols_ = 1;
        } else {
            rows_ = static_cast<std::int64_t>(std::floor(180.0 / row_height_)) + 1;
            double max_abs_lat = 0.0;
            for (const auto& p : points) max_abs_lat = std::max(max_abs_lat, std::abs(p.latitude));
            const double lat_star = std::min(90.0, max_abs_lat + row_height_);
            const double cos_star = std::cos(lat_star * kDegToRad);
            const double ratio = std::sin(angle / 2.0) * kCellSlack / cos_star;
            if (cos_star > 0.0 && ratio < 1.0) {
                const double width = 2.0 * std::asin(ratio) * kRadToDeg * kCellSlack;
                cols_ = static_cast<std::int64_t>(std::floor(360.0 / width));
            }
            if (cols_ < 3) cols_ = 1;
        }
        col_width_ = 360.0 / static_cast<double>(cols_);

        cell_of_.reserve(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            auto cell = locate(points[i]);
            cell_of_.push_back(cell);
            cells_[key(cell.first, cell.second)].push_back(i);
        }
    }

    /// Calls fn(j) for every point j in the 3x3 neighbourhood of point i.
    template <typename Fn>
    void for_each_neighbour(std::size_t i, Fn&& fn) const {
        const auto [row, col] = cell_of_[i];
        std::array<std::int64_t, 9> visited{};
        std::size_t n_visited = 0;
        for (std::int64_t dr = -1; dr <= 1; ++dr) {
            const std::int64_t r = row + dr;
            if (r < 0 || r >= rows_) continue;
            for (std::int64_t dc = -1; dc <= 1; ++dc) {
                const std::int64_t c = ((col + dc) % cols_ + cols_) % cols_;
                const std::int64_t k = key(r, c);
                if (std::find(visited.begin(), visited.begin() + n_visited, k) != visited.begin() + n_visited) continue;
                visited[n_visited++] = k;
                auto it = cells_.find(k);
                if (it == cells_.end()) continue;
                for (std::size_t j : it->second) fn(j);
            }
        }
    }

private:
    std::pair<std::int64_t, std::int64_t> locate(const GeoPoint& p) const {
        if (rows_ == 1) return {0, 0};
        auto row = static_cast<std::int64_t>(std::floor((p.latitude + 90.0) / row_height_));
        auto col = static_cast<std::int64_t>(std::floor((p.longitude + 180.0) / col_width_));
        return {std::clamp<std::int64_t>(row, 0, rows_ - 1), std::clamp<std::int64_t>(col, 0, cols_ - 1)};
    }

    std::int64_t key(std::int64_t row, std::int64_t col) const { return row * cols_ + col; }

    double row_height_ = 0.0;
    double col_width_ = 360.0;
    std::int64_t rows_ = 1;
    std::int64_t cols_ = 1;
    std::vector<std::pair<std::int64_t, std::int64_t>> cell_of_;
    std::unordered_map<std::int64_t, std::vector<std::size_t>> cells_;
};

void require_positive_radius(double radius_m) {
    if (!(radius_m > 0.0) || !std::isfinite(radius_m))
        throw ValidationError("radius_m", "radius_m must be a positive number");
}

}  // namespace

std::vector<std::vector<std::size_t>> proximity_components(std::span<const GeoPoint> points, double radius_m) {
    require_positive_radius(radius_m);
    for (const auto& p : points)
        if (!is_valid(p)) throw OutOfRangeError("point", "point outside WGS84 range");

    GridIndex grid(points, radius_m);
    DisjointSets sets(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        grid.for_each_neighbour(i, [&](std::size_t j) {
            if (j <= i || sets.find(i) == sets.find(j)) return;
            if (haversine_m(points[i], points[j]) <= radius_m) sets.unite(i, j);
        });
    }

    std::map<std::size_t, std::vector<std::size_t>> by_root;
    for (std::size_t i = 0; i < points.size(); ++i) by_root[sets.find(i)].push_back(i);

    std::vector<std::vector<std::size_t>> components;
    components.reserve(by_root.size());
    for (auto& [root, members] : by_root) components.push_back(std::move(members));
    std::sort(components.begin(), components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return components;
}

std::vector<Hotspot> cluster_hotspots(std::span<const CasePoint> cases, double radius_m, std::size_t min_cases) {
    require_positive_radius(radius_m);
    if (min_cases < 2) throw ValidationError("min_cases", "min_cases must be at least 2");

    std::vector<const CasePoint*> sorted;
    sorted.reserve(cases.size());
    for (const auto& c : cases) sorted.push_back(&c);
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->case_id < b->case_id; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i - 1]->case_id == sorted[i]->case_id)
            throw ValidationError("case_id", "duplicate case id " + sorted[i]->case_id);

    std::vector<GeoPoint> points;
    points.reserve(sorted.size());
    for (auto* c : sorted) points.push_back(c->point);

    std::vector<Hotspot> hotspots;
    for (const auto& component : proximity_components(points, radius_m)) {
        if (component.size() < min_cases) continue;
        Hotspot h;
        h.centroid = mean_centroid(component, [&](std::size_t i) -> const GeoPoint& { return points[i]; });
        for (std::size_t i : component) {
            h.case_ids.push_back(sorted[i]->case_id);
            h.radius_m = std::max(h.radius_m, haversine_m(h.centroid, points[i]));
        }
        h.member_count = component.size();
        hotspots.push_back(std::move(h));
    }
    return hotspots;
}

std::vector<InfectionSite> infer_infection_sites(std::span<const LocationTrace> traces,
                                                 std::span<const std::string> confirmed_users, double radius_m) {
    require_positive_radius(radius_m);
    const std::set<std::string> confirmed(confirmed_users.begin(), confirmed_users.end());

    std::vector<const LocationTrace*> relevant;
    for (const auto& t : traces)
        if (confirmed.contains(t.user_id())) relevant.push_back(&t);
    std::stable_sort(relevant.begin(), relevant.end(),
                     [](auto* a, auto* b) { return a->user_id() < b->user_id(); });

    struct Owned {
        const std::string* user;
        const LocationSample* sample;
    };
    std::vector<Owned> owned;
    std::vector<GeoPoint> points;
    for (auto* trace : relevant) {
        for (const auto& s : trace->samples()) {
            owned.push_back({&trace->user_id(), &s});
            points.push_back(s.point);
        }
    }

    std::vector<InfectionSite> sites;
    for (const auto& component : proximity_components(points, radius_m)) {
        std::set<std::string> users;
        for (std::size_t i : component) users.insert(*owned[i].user);
        if (users.size() < 2) continue;

        InfectionSite site;
        site.centroid = mean_centroid(component, [&](std::size_t i) -> const GeoPoint& { return points[i]; });
        site.contributing_users.assign(users.begin(), users.end());
        site.sample_count = component.size();
        site.first_seen = owned[component.front()].sample->recorded_at;
        site.last_seen = site.first_seen;
        for (std::size_t i : component) {
            site.first_seen = std::min(site.first_seen, owned[i].sample->recorded_at);
            site.last_seen = std::max(site.last_seen, owned[i].sample->recorded_at);
        }
        sites.push_back(std::move(site));
    }
    return sites;
}

}  // namespace dengue::geo
