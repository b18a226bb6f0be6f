#include "dengue/ops/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "dengue/core/errors.hpp"

namespace dengue::ops {

namespace {

constexpr double kMetresPerDegree = geo::kEarthRadiusM * std::numbers::pi / 180.0;

double wrap_lon(double lon) {
    while (lon > 180.0) lon -= 360.0;
    while (lon < -180.0) lon += 360.0;
    return lon;
}

std::string numbered(const char* prefix, std::size_t n) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%05zu", prefix, n);
    return buf;
}

class Generator {
public:
    explicit Generator(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

    geo::GeoPoint in_box(const geo::BoundingBox& box) {
        const double span = box.crosses_antimeridian() ? box.max_lon + 360.0 - box.min_lon : box.max_lon - box.min_lon;
        return {uniform(box.min_lat, box.max_lat), wrap_lon(box.min_lon + uniform(0.0, span))};
    }

    /// Isotropic Gaussian offset with the given sigma in metres.
    geo::GeoPoint scatter(const geo::GeoPoint& c, double sigma_m) {
        const double north = normal() * sigma_m;
        const double east = normal() * sigma_m;
        const double lat = std::clamp(c.latitude + north / kMetresPerDegree, -90.0, 90.0);
        const double cos_lat = std::max(std::cos(lat * std::numbers::pi / 180.0), 1e-9);
        return {lat, wrap_lon(c.longitude + east / (kMetresPerDegree * cos_lat))};
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace

SimulatedOutbreak simulate_outbreak(const OutbreakParams& p) {
    geo::validate(p.bbox);
    const std::size_t planted = p.hotspot_count * p.cluster_size;
    if (planted > p.cases)
        throw ValidationError("cases", "cases must be at least hotspot_count * cluster_size");
    if (p.users < p.cases) throw ValidationError("users", "users must be at least the number of cases");
    if (!(p.hotspot_radius_m > 0.0)) throw ValidationError("hotspot_radius_m", "hotspot_radius_m must be positive");
    if (!(p.trace_fraction >= 0.0 && p.trace_fraction <= 1.0))
        throw ValidationError("trace_fraction", "trace_fraction must be within [0, 1]");

    Generator gen(p.seed);
    SimulatedOutbreak out;

    for (std::size_t i = 0; i < p.users; ++i) {
        UserProfile u;
        u.user_id = numbered("usr_sim_", i);
        u.name = numbered("Simulated user ", i);
        u.email = numbered("sim", i) + "@outbreak.invalid";
        u.password_digest = "!";  // login disabled
        u.date_of_birth = Date{std::chrono::year{1950 + static_cast<int>(gen.index(55))}, std::chrono::month{1 + static_cast<unsigned>(gen.index(12))},
                               std::chrono::day{1 + static_cast<unsigned>(gen.index(28))}};
        u.gender = std::array{Gender::Female, Gender::Male, Gender::Other}[gen.index(3)];
        u.height_cm = std::round(gen.uniform(145.0, 195.0));
        u.weight_kg = std::round(gen.uniform(45.0, 110.0));
        u.created_at = p.anchor - std::chrono::days{30};
        out.users.push_back(std::move(u));
    }

    const double sigma = p.hotspot_radius_m / 3.0;
    for (std::size_t k = 0; k < p.hotspot_count; ++k) {
        geo::GeoPoint center = gen.in_box(p.bbox);
        for (int attempt = 0; attempt < 1000; ++attempt) {
            bool clear = std::all_of(out.clusters.begin(), out.clusters.end(), [&](const PlantedCluster& c) {
                return geo::haversine_m(c.center, center) >= p.min_center_separation_m;
            });
            if (clear) break;
            center = gen.in_box(p.bbox);
        }
        out.clusters.push_back({center, sigma, p.cluster_size});
    }

    auto report_time = [&] {
        auto minutes_back = static_cast<long>(gen.index(14 * 24 * 60));
        return p.anchor - std::chrono::minutes{minutes_back};
    };

    std::size_t next_case = 0;
    auto add_case = [&](geo::GeoPoint where) {
        store::CaseReport c;
        c.case_id = numbered("case_sim_", next_case);
        c.user_id = out.users[next_case].user_id;
        c.point = where;
        c.reported_at = report_time();
        out.cases.push_back(std::move(c));
        ++next_case;
    };
    for (const auto& cluster : out.clusters)
        for (std::size_t i = 0; i < cluster.size; ++i) add_case(gen.scatter(cluster.center, cluster.sigma_m));
    while (next_case < p.cases) add_case(gen.in_box(p.bbox));

    // Traces: a random subset of reporting users, each with 48 hourly fixes
    // around home and one visit to a shared site.
    const auto traced = static_cast<std::size_t>(std::llround(p.trace_fraction * static_cast<double>(p.cases)));
    if (traced > 0) {
        std::vector<std::size_t> order(p.cases);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), gen.engine());
        order.resize(traced);
        std::sort(order.begin(), order.end());

        const geo::GeoPoint site = gen.in_box(p.bbox);
        if (traced >= 2) out.planted_sites.push_back(site);
        const auto start = std::chrono::floor<std::chrono::hours>(p.anchor) - std::chrono::hours{48};
        for (std::size_t idx : order) {
            const auto& c = out.cases[idx];
            geo::LocationTrace trace(c.user_id);
            const std::size_t visit_hour = 8 + gen.index(32);
            for (std::size_t h = 0; h < 48; ++h) {
                geo::GeoPoint where = h == visit_hour ? gen.scatter(site, 10.0) : gen.scatter(*c.point, 30.0);
                trace.append({where, start + std::chrono::hours{h}}, p.anchor);
            }
            out.traces.push_back(std::move(trace));
        }
    }
    return out;
}

void populate(store::Store& store, const SimulatedOutbreak& outbreak) {
    for (const auto& u : outbreak.users) store.create_user(u);
    for (const auto& c : outbreak.cases) store.insert_case(c, std::chrono::milliseconds{0});
    for (const auto& t : outbreak.traces) {
        std::vector<geo::LocationSample> samples(t.samples().begin(), t.samples().end());
        Timestamp latest = samples.empty() ? Timestamp{} : samples.back().recorded_at;
        store.append_samples(t.user_id(), samples, latest);
    }
}

nlohmann::ordered_json ground_truth(const OutbreakParams& params, const SimulatedOutbreak& outbreak) {
    using nlohmann::ordered_json;
    ordered_json clusters = ordered_json::array();
    for (const auto& c : outbreak.clusters)
        clusters.push_back({{"latitude", c.center.latitude},
                            {"longitude", c.center.longitude},
                            {"sigma_m", c.sigma_m},
                            {"size", c.size}});
    ordered_json sites = ordered_json::array();
    for (const auto& s : outbreak.planted_sites) sites.push_back({{"latitude", s.latitude}, {"longitude", s.longitude}});
    return ordered_json{{"seed", params.seed},
                        {"users", outbreak.users.size()},
                        {"cases", outbreak.cases.size()},
                        {"background_cases", outbreak.cases.size() - params.hotspot_count * params.cluster_size},
                        {"traced_users", outbreak.traces.size()},
                        {"clusters", clusters},
                        {"infection_sites", sites}};
}

}  // namespace dengue::ops
