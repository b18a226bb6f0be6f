// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <httplib.h>

#include <atomic>
#include <barrier>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include "api_harness.hpp"
#include "dengue/api/http_server.hpp"
#include "dengue/core/classifier.hpp"
#include "dengue/geo/clustering.hpp"
#include "dengue/geo/trace.hpp"
#include "dengue/ops/simulate.hpp"
#include "dengue/sms/handler.hpp"
#include "durability.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "sms_gen.hpp"
#include "wire_gen.hpp"

using namespace dengue;
using testing::json;

namespace {

struct Result {
    bool pass = true;
    std::string detail;
};

/// Collects failures; the first few are kept for the report line.
class Verdict {
public:
    void require(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        if (failures_ <= 3) notes_ << (failures_ > 1 ? "; " : "") << what;
    }
    void note(const std::string& s) { extra_ = s; }
    Result done() const {
        std::ostringstream out;
        if (failures_ > 0) out << failures_ << " failure(s): " << notes_.str();
        if (!extra_.empty()) out << (failures_ > 0 ? " | " : "") << extra_;
        return {failures_ == 0, out.str()};
    }

private:
    std::size_t failures_ = 0;
    std::ostringstream notes_;
    std::string extra_;
};

using Seconds = std::chrono::duration<double>;

Result classifier_exhaustive() {
    Verdict v;
    const auto now = testing::at("2024-03-01T10:00:00Z");
    for (unsigned mask = 0; mask < 512; ++mask) {
        const bool expected = (mask & 1u) != 0 && __builtin_popcount(mask) >= 3;
        auto r = classify_symptoms(SymptomSet::from_mask(static_cast<std::uint16_t>(mask)), now);
        v.require(r.likely_dengue == expected, "mask " + std::to_string(mask));
        if (r.likely_dengue) v.require(r.advice.find(kReferralSentence) != std::string::npos, "referral text");
    }
    return v.done();
}

Result ring_buffer_law() {
    Verdict v;
    std::mt19937_64 rng(2024);
    const auto t0 = testing::at("2024-01-01T00:00:00Z");
    const auto now = t0 + std::chrono::hours(10'000);
    std::uniform_int_distribution<int> len(0, 2000);
    std::uniform_int_distribution<int> spread_hours(10, 4000);
    for (int run = 0; run < 1000; ++run) {
        std::uniform_int_distribution<std::int64_t> minute(0, spread_hours(rng) * 60);
        std::vector<geo::LocationSample> appended;
        geo::LocationTrace trace("u");
        const int n = len(rng);
        for (int i = 0; i < n; ++i) {
            geo::LocationSample s{{-18.0 + i * 1e-6, 178.0}, t0 + std::chrono::minutes(minute(rng))};
            appended.push_back(s);
            trace.append(s, now);
        }
        std::vector<geo::LocationSample> got(trace.samples().begin(), trace.samples().end());
        v.require(got == oracle::ring_buffer(appended), "sequence " + std::to_string(run));
    }
    return v.done();
}

Result haversine_checks() {
    Verdict v;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
    for (int i = 0; i < 10'000; ++i) {
        geo::GeoPoint a{lat(rng), lon(rng)}, b{lat(rng), lon(rng)};
        v.require(geo::haversine_m(a, b) == geo::haversine_m(b, a), "symmetry");
        v.require(geo::haversine_m(a, a) == 0.0, "self distance");
    }
    const double equator = geo::haversine_m({0, 0}, {0, 1});
    v.require(std::abs(equator - 111'195.0) <= 1.0, "equator degree " + std::to_string(equator));

    const geo::BoundingBox fiji{-21.0, 176.0, -12.0, -178.0};
    std::uniform_real_distribution<double> flat(fiji.min_lat, fiji.max_lat), flon(176.0, 182.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        auto pick = [&] {
            double lo = flon(rng);
            return geo::GeoPoint{flat(rng), lo > 180 ? lo - 360 : lo};
        };
        auto a = pick(), b = pick();
        const double ref = oracle::great_circle_m(a, b);
        const double rel = ref == 0.0 ? 0.0 : std::abs(geo::haversine_m(a, b) - ref) / ref;
        worst = std::max(worst, rel);
        v.require(rel <= 1e-3, "Fiji pair off by " + std::to_string(rel));
    }
    std::ostringstream note;
    note << "equator 1deg = " << equator << " m, worst Fiji relative error " << worst;
    v.note(note.str());
    return v.done();
}

Result hotspot_oracle() {
    Verdict v;
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> count(0, 200);
    std::uniform_real_distribution<double> extent(300, 5000);
    std::uniform_real_distribution<double> radius(50, 400);
    std::uniform_int_distribution<std::size_t> min_cases(2, 6);
    int seam = 0;
    for (int run = 0; run < 200; ++run) {
        const bool on_seam = run % 4 == 0;
        seam += on_seam;
        auto cases = testing::random_cases(rng, count(rng), extent(rng), on_seam);
        const double r = radius(rng);
        const auto m = min_cases(rng);
        auto got = geo::cluster_hotspots(cases, r, m);
        v.require(testing::id_sets(got) == testing::oracle_hotspots(cases, r, m), "instance " + std::to_string(run));
    }
    v.note(std::to_string(seam) + " of 200 instances straddle the antimeridian");
    return v.done();
}

Result planted_recovery() {
    Verdict v;
    int recovered = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        ops::OutbreakParams params;
        params.seed = seed;
        params.hotspot_count = 3;
        params.cluster_size = 10;
        params.hotspot_radius_m = 150.0;  // sigma = 50 m
        params.cases = 30 + 20;
        auto outbreak = ops::simulate_outbreak(params);
        std::vector<geo::CasePoint> cases;
        for (const auto& c : outbreak.cases) cases.push_back({c.case_id, *c.point});
        auto hotspots = geo::cluster_hotspots(cases, 200.0, 5);
        bool ok = hotspots.size() >= 3 && outbreak.clusters.size() == 3;
        for (const auto& planted : outbreak.clusters) {
            ok = ok && planted.sigma_m == 50.0;
            double best = 1e18;
            for (const auto& h : hotspots) best = std::min(best, geo::haversine_m(h.centroid, planted.center));
            ok = ok && best <= 100.0;
        }
        recovered += ok;
        v.require(ok, "seed " + std::to_string(seed));
    }
    v.note(std::to_string(recovered) + "/20 seeds recovered");
    return v.done();
}

Result infection_site_rule() {
    Verdict v;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> jitter(-30, 30), far(-40'000, 40'000);
    std::uniform_int_distribution<int> hour(0, 470), extra(0, 4);
    const geo::GeoPoint origin{-17.8, 178.0};
    for (int run = 0; run < 100; ++run) {
        // Two users share one spot; others wander at least 10 km away from it.
        const geo::GeoPoint spot = testing::offset(origin, far(rng), far(rng));
        std::vector<geo::LocationTrace> traces;
        std::vector<std::string> users;
        const int n_users = 2 + extra(rng);
        for (int u = 0; u < n_users; ++u) {
            std::vector<geo::LocationSample> samples;
            for (int k = 0; k < 12; ++k) {
                geo::GeoPoint p;
                do {
                    p = testing::offset(origin, far(rng), far(rng));
                } while (geo::haversine_m(p, spot) < 10'000);
                samples.push_back({p, testing::at("2024-01-01T00:00:00Z") + std::chrono::hours(hour(rng))});
            }
            if (u < 2)
                samples.push_back({testing::offset(spot, jitter(rng), jitter(rng)),
                                   testing::at("2024-01-01T00:00:00Z") + std::chrono::hours(471 + u)});
            users.push_back("u" + std::to_string(u));
            traces.push_back(geo::LocationTrace::restore(users.back(), samples));
        }
        auto near_spot = [&](const std::vector<geo::InfectionSite>& sites) {
            std::vector<geo::InfectionSite> out;
            for (const auto& s : sites)
                if (geo::haversine_m(s.centroid, spot) < 1'000) out.push_back(s);
            return out;
        };
        auto sites = geo::infer_infection_sites(traces, users, 100.0);
        for (const auto& s : sites) v.require(s.contributing_users.size() >= 2, "site with one user");
        auto planted = near_spot(sites);
        v.require(planted.size() == 1 &&
                      planted[0].contributing_users == std::vector<std::string>{"u0", "u1"},
                  "planted site missing in instance " + std::to_string(run));

        auto without = traces;
        without[1] = geo::LocationTrace("u1");
        auto after = geo::infer_infection_sites(without, users, 100.0);
        v.require(near_spot(after).empty(), "site survived deletion in instance " + std::to_string(run));
        for (const auto& s : after) v.require(s.contributing_users.size() >= 2, "site with one user");
    }
    return v.done();
}

Result api_contract() {
    Verdict v;
    testing::WireGen g(99);
    for (int i = 0; i < 1000; ++i) {
        auto bad = testing::round_trip_all(g);
        v.require(bad.empty(), "round trip " + bad);
    }

    testing::ApiHarness h;
    auto live = h.session("ops@health.gov.fj", true);
    auto expired = h.login("ops@health.gov.fj");
    auto revoked = h.login("ops@health.gov.fj");
    h.post("/logout", json::object(), revoked);
    h.clock.advance(std::chrono::hours(23));
    live = h.login("ops@health.gov.fj");
    auto case_id = testing::body_of(h.post("/cases", json::object(), live)).at("case_id").get<std::string>();
    h.clock.advance(std::chrono::hours(2));

    const std::vector<std::optional<std::string>> modes{
        std::nullopt,                            // missing
        "Bearer abc",                            // malformed
        "Bearer " + expired,                     // expired
        "Bearer " + revoked,                     // revoked
        "Bearer " + std::string(64, 'f'),        // well-formed but never issued
    };
    const std::vector<std::pair<std::string, std::string>> endpoints{
        {"POST", "/logout"},          {"POST", "/symptom-check"},  {"POST", "/cases"},
        {"PATCH", "/cases/" + case_id + "/location"},
        {"POST", "/locations"},       {"POST", "/papaya-feedback"}, {"GET", "/map/markers"},
        {"GET", "/map/hotspots"},     {"GET", "/map/infection-sites"}};
    std::optional<std::string> reference;
    for (const auto& [method, path] : endpoints) {
        for (const auto& auth : modes) {
            api::HttpRequest r{method, "/api/v1" + path, {}, auth, "{\"garbage\":"};
            auto resp = h.service.handle(r);
            if (!reference) reference = resp.body;
            v.require(resp.status == 401 && resp.body == *reference, method + " " + path);
        }
    }

    h.register_user("mere@example.fj");
    auto wrong = h.post("/login", {{"email", "mere@example.fj"}, {"password", "wrong horse"}});
    auto unknown = h.post("/login", {{"email", "nobody@example.fj"}, {"password", "wrong horse"}});
    v.require(wrong.status == 401 && unknown.status == 401, "login failure status");
    v.require(wrong.body == unknown.body, "login failure bodies differ");
    v.note("1000 payload rounds x 18 DTOs; " + std::to_string(endpoints.size()) + " endpoints x 5 token modes");
    return v.done();
}

Result sms_checks() {
    Verdict v;
    std::mt19937_64 rng(5150);
    for (int i = 0; i < 1000; ++i) {
        auto cmd = testing::random_command(rng);
        auto text = sms::render(cmd);
        auto parsed = sms::parse_sms(text);
        v.require(text.size() <= sms::kMaxSmsLength, "render too long: " + text);
        v.require(std::holds_alternative<sms::SmsCommand>(parsed) && std::get<sms::SmsCommand>(parsed) == cmd,
                  "round trip: " + text);
    }

    testing::ApiHarness h;
    auto token = h.session("mere@example.fj");
    h.store->link_phone(h.store->get_user_by_email("mere@example.fj")->user_id, "+6799991234");
    sms::SmsService service(*h.store, std::chrono::milliseconds(0), h.clock.clock());
    std::size_t longest = 0;
    auto check_reply = [&](const std::string& reply) {
        longest = std::max(longest, reply.size());
        v.require(reply.size() <= sms::kMaxSmsLength, "reply over 160: " + reply);
    };
    for (int i = 0; i < 10'000; ++i) {
        auto text = testing::fuzz_text(rng);
        auto parsed = sms::parse_sms(text);  // must return, whatever the input
        if (auto* e = std::get_if<sms::ParseError>(&parsed)) v.require(!e->expected.empty(), "empty expectation");
        check_reply(service.receive(i % 2 ? "+6799991234" : "+1555", text));
    }
    for (unsigned mask = 1; mask < 512; ++mask) {
        auto set = SymptomSet::from_mask(static_cast<std::uint16_t>(mask));
        json codes = json::array();
        for (auto s : set.to_vector()) codes.push_back(to_code(s));
        auto api = testing::body_of(h.post("/symptom-check", {{"symptoms", codes}}, token));
        auto reply = service.receive("+6799991234", sms::render(sms::CheckCommand{set}));
        check_reply(reply);
        v.require((reply == sms::kPositiveReply) == api.at("likely_dengue").get<bool>(),
                  "mask " + std::to_string(mask));
    }
    // The empty set has no SMS spelling; the API answers it negatively.
    v.require(testing::body_of(h.post("/symptom-check", {{"symptoms", json::array()}}, token))
                      .at("likely_dengue") == false,
              "empty set");
    for (auto text : {"HELP", "REPORT", "REPORT -17.5 177.6", "PAPAYA 45000 120000", "PAPAYA 1 9"})
        check_reply(service.receive("+6799991234", text));
    v.note("longest reply " + std::to_string(longest) + " chars");
    return v.done();
}

Result durability() {
    Verdict v;
    testing::TempDir dir;
    auto report = testing::run_durability_probe(dir.file("durable.db"), 200);
    v.require(report.child_killed, "writer was not killed by SIGKILL");
    v.require(report.acknowledged >= 200, "too few acknowledged writes");
    v.require(report.missing == 0, std::to_string(report.missing) + " acknowledged writes lost");
    v.note(std::to_string(report.acknowledged) + " acknowledged (user+case+feedback), " +
           std::to_string(report.missing) + " missing after SIGKILL");
    return v.done();
}

Result load_sanity() {
    Verdict v;
    testing::TempDir dir;
    auto store = store::open_sqlite_store(dir.file("load.db"));
    api::ApiConfig config;  // production hashing cost and rate limit
    api::ApiService service(*store, config);
    api::HttpServer server(service, {"127.0.0.1", 0, 64, ""});
    const int port = server.bind();
    std::thread runner([&] { server.run(); });

    constexpr int kClients = 100;
    std::atomic<int> server_errors{0}, transport_errors{0}, unexpected{0}, completed{0};
    std::barrier start(kClients);
    auto client_main = [&](int i) {
        httplib::Client c("127.0.0.1", port);
        c.set_connection_timeout(30);
        c.set_read_timeout(60);
        c.set_write_timeout(30);
        start.arrive_and_wait();
        auto expect = [&](const httplib::Result& r, int status) -> bool {
            if (!r) {
                ++transport_errors;
                return false;
            }
            if (r->status >= 500) ++server_errors;
            if (r->status != status) {
                ++unexpected;
                return false;
            }
            return true;
        };
        const std::string email = "load" + std::to_string(i) + "@example.fj";
        auto reg = testing::ApiHarness::registration(email);
        if (!expect(c.Post("/api/v1/register", reg.dump(), "application/json"), 201)) return;
        auto login = c.Post("/api/v1/login", json{{"email", email}, {"password", "correct horse"}}.dump(),
                            "application/json");
        if (!expect(login, 200)) return;
        httplib::Headers auth{{"Authorization", "Bearer " + json::parse(login->body).at("token").get<std::string>()}};
        if (!expect(c.Post("/api/v1/symptom-check", auth, R"({"symptoms":["FEVER","RASH","NAUSEA"]})",
                           "application/json"),
                    200))
            return;
        json report{{"latitude", -18.1 + i * 1e-3}, {"longitude", 178.4}};
        if (!expect(c.Post("/api/v1/cases", auth, report.dump(), "application/json"), 201)) return;
        ++completed;
    };

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::thread> clients;
    for (int i = 0; i < kClients; ++i) clients.emplace_back(client_main, i);
    for (auto& t : clients) t.join();
    const double elapsed = Seconds(std::chrono::steady_clock::now() - t0).count();
    server.stop();
    runner.join();

    v.require(server_errors == 0, std::to_string(server_errors.load()) + " 5xx responses");
    v.require(transport_errors == 0, std::to_string(transport_errors.load()) + " transport errors");
    v.require(completed == kClients, std::to_string(completed.load()) + "/100 clients completed");
    v.require(store->all_cases().size() == kClients, "stored case count");
    v.require(elapsed < 60.0, "took " + std::to_string(elapsed) + " s");
    std::ostringstream note;
    note.precision(3);
    note << completed.load() << "/100 clients, " << server_errors.load() << " 5xx, " << unexpected.load()
         << " unexpected statuses, " << elapsed << " s";
    v.note(note.str());
    return v.done();
}

struct Criterion {
    const char* name;
    double budget_s;  // 0 = no time bound
    std::function<Result()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"classifier: 512 subsets match FEVER and |S|>=3", 1.0, classifier_exhaustive},
        {"trace: 1000 random sequences obey the keep-last-480 law", 10.0, ring_buffer_law},
        {"haversine: symmetry, zero self distance, equator degree, Fiji oracle", 0.0, haversine_checks},
        {"hotspots: 200 random instances equal all-pairs components", 30.0, hotspot_oracle},
        {"outbreak: planted clusters recovered for 20 of 20 seeds", 0.0, planted_recovery},
        {"infection sites: two-user rule and deletion on 100 instances", 0.0, infection_site_rule},
        {"api: wire round trips, uniform 401s, identical login failures", 0.0, api_contract},
        {"sms: round trip, fuzz, API equivalence, 160-char replies", 0.0, sms_checks},
        {"durability: acknowledged writes survive SIGKILL", 0.0, durability},
        {"load: 100 concurrent register/login/check/report clients", 60.0, load_sanity},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Result out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed = Seconds(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && elapsed >= c.budget_s) {
            out.pass = false;
            out.detail += " | over time budget";
        }
        failed += !out.pass;
        std::printf("%s  %-72s %7.2fs", out.pass ? "PASS" : "FAIL", c.name, elapsed);
        if (c.budget_s > 0) std::printf(" (limit %.0fs)", c.budget_s);
        if (!out.detail.empty()) std::printf("  %s", out.detail.c_str());
        std::printf("\n");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
