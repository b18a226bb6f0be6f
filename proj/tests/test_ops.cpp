#include <doctest.h>

#include <fstream>

#include "dengue/core/errors.hpp"
#include "dengue/geo/clustering.hpp"
#include "dengue/ops/config.hpp"
#include "dengue/ops/export.hpp"
#include "dengue/ops/simulate.hpp"
#include "dengue/store/store.hpp"
#include "test_support.hpp"

using namespace dengue;
using namespace dengue::ops;

TEST_CASE("config precedence is flags, then environment, then file, then defaults") {
    auto defaults = resolve_config({}, {}, {});
    CHECK(defaults.port == 8080);
    CHECK(defaults.store_path == "dengue.db");
    CHECK(defaults.hotspot_radius_m == 200.0);

    ConfigLayer file{{"store", "file.db"}, {"listen", "0.0.0.0:9000"}, {"min_cases", "4"}};
    ConfigLayer env{{"store", "env.db"}, {"hotspot_radius_m", "250"}};
    ConfigLayer flags{{"store", "flag.db"}};
    auto cfg = resolve_config(flags, env, file);
    CHECK(cfg.store_path == "flag.db");
    CHECK(cfg.hotspot_radius_m == 250.0);
    CHECK(cfg.host == "0.0.0.0");
    CHECK(cfg.port == 9000);
    CHECK(cfg.min_cases == 4);
    CHECK(resolve_config({}, env, file).store_path == "env.db");
    CHECK(resolve_config({}, {}, file).store_path == "file.db");

    CHECK_THROWS_AS(resolve_config({{"listen", "nohost"}}, {}, {}), ValidationError);
    CHECK_THROWS_AS(resolve_config({{"listen", "h:70000"}}, {}, {}), ValidationError);
    CHECK_THROWS_AS(resolve_config({{"min_cases", "1"}}, {}, {}), ValidationError);
    CHECK_THROWS_AS(resolve_config({{"hotspot_radius_m", "-3"}}, {}, {}), ValidationError);
    CHECK_THROWS_AS(resolve_config({}, {}, {{"colour", "blue"}}), ValidationError);
}

TEST_CASE("environment layer") {
    CHECK(env_name("store") == "DENGUE_STORE");
    CHECK(env_name("hotspot_radius_m") == "DENGUE_HOTSPOT_RADIUS_M");
    auto layer = env_layer([](const char* name) -> const char* {
        if (std::string_view(name) == "DENGUE_STORE") return "/tmp/x.db";
        return nullptr;
    });
    CHECK(layer == ConfigLayer{{"store", "/tmp/x.db"}});
}

TEST_CASE("config file") {
    testing::TempDir dir;
    {
        std::ofstream out(dir.file("c.json"));
        out << R"({"store": "a.db", "min_cases": 5, "hotspot_radius_m": 120.5})";
    }
    auto layer = load_config_file(dir.file("c.json"));
    CHECK(layer.at("store") == "a.db");
    CHECK(resolve_config({}, {}, layer).min_cases == 5);
    CHECK(resolve_config({}, {}, layer).hotspot_radius_m == 120.5);
    {
        std::ofstream out(dir.file("bad.json"));
        out << "[1, 2";
    }
    CHECK_THROWS(load_config_file(dir.file("bad.json")));
    CHECK_THROWS(load_config_file(dir.file("missing.json")));
}

namespace {

std::string export_text(std::uint64_t seed) {
    OutbreakParams params;
    params.seed = seed;
    auto outbreak = simulate_outbreak(params);
    auto store = store::make_memory_store();
    populate(*store, outbreak);
    return export_geojson(*store, {}).dump(2) + ground_truth(params, outbreak).dump() + export_csv(*store, {});
}

}  // namespace

TEST_CASE("simulation is deterministic per seed") {
    auto a = export_text(42);
    CHECK(a == export_text(42));
    CHECK(a != export_text(43));
}

TEST_CASE("simulated data respects its parameters") {
    OutbreakParams params;
    auto outbreak = simulate_outbreak(params);
    CHECK(outbreak.users.size() == params.users);
    CHECK(outbreak.cases.size() == params.cases);
    CHECK(outbreak.clusters.size() == 3);
    for (const auto& c : outbreak.cases) {
        REQUIRE(c.point);
        CHECK(params.bbox.contains(*c.point));
        CHECK(c.reported_at <= params.anchor);
        CHECK(c.reported_at > params.anchor - std::chrono::days(15));
    }
    for (std::size_t i = 0; i < outbreak.clusters.size(); ++i)
        for (std::size_t j = i + 1; j < outbreak.clusters.size(); ++j)
            CHECK(geo::haversine_m(outbreak.clusters[i].center, outbreak.clusters[j].center) >=
                  params.min_center_separation_m);
    CHECK(outbreak.clusters[0].sigma_m == doctest::Approx(50.0));

    auto bad = params;
    bad.bbox = {10, 0, -10, 1};
    CHECK_THROWS_AS(simulate_outbreak(bad), ValidationError);
    bad = params;
    bad.cases = 10;  // fewer than the planted clusters need
    CHECK_THROWS_AS(simulate_outbreak(bad), ValidationError);
}

TEST_CASE("planted clusters are recovered by hotspot detection") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        OutbreakParams params;
        params.seed = seed;
        auto outbreak = simulate_outbreak(params);
        std::vector<geo::CasePoint> cases;
        for (const auto& c : outbreak.cases) cases.push_back({c.case_id, *c.point});
        auto hotspots = geo::cluster_hotspots(cases, params.hotspot_radius_m, 3);
        CHECK(hotspots.size() >= 3);
        for (const auto& planted : outbreak.clusters) {
            double best = 1e18;
            for (const auto& h : hotspots) best = std::min(best, geo::haversine_m(h.centroid, planted.center));
            CHECK(best <= 2 * planted.sigma_m);
        }
    }
}

TEST_CASE("no planted clusters means no hotspots at low density") {
    OutbreakParams params;
    params.hotspot_count = 0;
    params.cases = 20;
    auto outbreak = simulate_outbreak(params);
    std::vector<geo::CasePoint> cases;
    for (const auto& c : outbreak.cases) cases.push_back({c.case_id, *c.point});
    CHECK(geo::cluster_hotspots(cases, params.hotspot_radius_m, 3).empty());
}

TEST_CASE("simulated traces share planted sites") {
    OutbreakParams params;
    params.trace_fraction = 0.5;
    auto outbreak = simulate_outbreak(params);
    REQUIRE(outbreak.traces.size() >= 2);
    REQUIRE_FALSE(outbreak.planted_sites.empty());
    std::vector<std::string> confirmed;
    for (const auto& c : outbreak.cases) confirmed.push_back(c.user_id);
    auto sites = geo::infer_infection_sites(outbreak.traces, confirmed, geo::kDefaultSiteRadiusM);
    REQUIRE_FALSE(sites.empty());
    for (const auto& planted : outbreak.planted_sites) {
        double best = 1e18;
        for (const auto& s : sites) best = std::min(best, geo::haversine_m(s.centroid, planted));
        CHECK(best <= geo::kDefaultSiteRadiusM);
    }
}

TEST_CASE("GeoJSON export") {
    auto store = store::make_memory_store();
    auto empty = export_geojson(*store, {});
    CHECK(empty.dump() == R"({"type":"FeatureCollection","features":[]})");

    OutbreakParams params;
    auto outbreak = simulate_outbreak(params);
    populate(*store, outbreak);
    ExportQuery query;
    query.bbox = {-18.0, 177.25, -17.28, 178.70};
    auto doc = export_geojson(*store, query);
    auto expected = store->query_cases(query.bbox, query.from, query.to);

    // Re-parse the text and check the RFC 7946 shape.
    auto parsed = nlohmann::json::parse(doc.dump());
    REQUIRE(parsed.at("type") == "FeatureCollection");
    std::size_t case_features = 0, hotspot_features = 0;
    for (const auto& f : parsed.at("features")) {
        REQUIRE(f.at("type") == "Feature");
        const auto& g = f.at("geometry");
        REQUIRE(g.at("type") == "Point");
        REQUIRE(g.at("coordinates").size() == 2);
        double lon = g.at("coordinates")[0], lat = g.at("coordinates")[1];
        CHECK(lon >= -180);
        CHECK(lon <= 180);
        CHECK(lat >= -90);
        CHECK(lat <= 90);
        const auto& p = f.at("properties");
        if (p.at("kind") == "case") {
            REQUIRE(case_features < expected.size());
            const auto& c = expected[case_features];
            CHECK(p.at("case_id") == c.case_id);
            CHECK(p.at("reported_at") == format_rfc3339(c.reported_at));
            CHECK(lon == c.point->longitude);
            CHECK(lat == c.point->latitude);
            ++case_features;
        } else {
            REQUIRE(p.at("kind") == "hotspot");
            CHECK(p.at("member_count").get<int>() >= 3);
            CHECK(p.contains("radius_m"));
            ++hotspot_features;
        }
    }
    CHECK(case_features == expected.size());
    CHECK(hotspot_features >= 1);

    query.include_hotspots = false;
    CHECK(export_geojson(*store, query).at("features").size() == expected.size());
    auto csv = export_csv(*store, query);
    CHECK(csv.starts_with("case_id,latitude,longitude,reported_at\n"));
    CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == expected.size() + 1);
}

TEST_CASE("bbox parsing") {
    CHECK(parse_bbox("-18.3,177.25,-17.28,178.7") == geo::BoundingBox{-18.3, 177.25, -17.28, 178.7});
    CHECK(parse_bbox("-21,177,-12,-178").crosses_antimeridian());
    CHECK_THROWS_AS(parse_bbox("1,2,3"), ValidationError);
    CHECK_THROWS_AS(parse_bbox("a,b,c,d"), ValidationError);
    CHECK_THROWS_AS(parse_bbox("5,0,-5,1"), ValidationError);
}
