// denguectl: operator tool for the dengue surveillance service.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "dengue/api/http_server.hpp"
#include "dengue/api/password.hpp"
#include "dengue/api/service.hpp"
#include "dengue/core/errors.hpp"
#include "dengue/ops/config.hpp"
#include "dengue/ops/export.hpp"
#include "dengue/ops/simulate.hpp"

#ifndef DENGUE_VERSION
#define DENGUE_VERSION "dev"
#endif

namespace {

using namespace dengue;

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

std::atomic<bool> g_stop_requested{false};

extern "C" void on_signal(int) { g_stop_requested = true; }

struct CommonOptions {
    std::string config_file;
    ops::ConfigLayer flags;
};

ops::ServiceConfig resolve(const CommonOptions& common) {
    ops::ConfigLayer file;
    if (!common.config_file.empty()) file = ops::load_config_file(common.config_file);
    return ops::resolve_config(common.flags, ops::env_layer([](const char* n) { return std::getenv(n); }), file);
}

/// Binds --flag values into the flags layer only when given on the command line.
void add_config_flag(CLI::App* app, CommonOptions& common, const std::string& flag, const std::string& key,
                     const std::string& help) {
    app->add_option_function<std::string>(flag, [&common, key](const std::string& v) { common.flags[key] = v; }, help);
}

UserProfile require_user(store::Store& store, const std::string& email) {
    auto user = store.get_user_by_email(email);
    if (!user) throw NotFoundError("no user with email " + email);
    return *user;
}

int run_serve(const CommonOptions& common) {
    auto cfg = resolve(common);
    auto store = store::open_store(cfg.store_path);

    api::ApiConfig api_cfg;
    api_cfg.token_lifetime = std::chrono::milliseconds{static_cast<long long>(cfg.token_lifetime_hours * 3'600'000.0)};
    api_cfg.hotspot_radius_m = cfg.hotspot_radius_m;
    api_cfg.site_radius_m = cfg.site_radius_m;
    api_cfg.min_cases = cfg.min_cases;
    api_cfg.rate_limit_per_minute = cfg.rate_limit_per_minute;
    api_cfg.version = DENGUE_VERSION;
    api::ApiService service(*store, api_cfg);

    api::HttpServer server(service, {cfg.host, cfg.port, 64, cfg.web_root});
    const int port = server.bind();
    std::cout << "listening on http://" << cfg.host << ":" << port << std::endl;

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::thread watcher([&server] {
        while (!g_stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        server.stop();
    });
    server.run();
    g_stop_requested = true;
    watcher.join();
    std::cout << "stopped" << std::endl;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dengue surveillance service: server, outbreak simulation, map export and account admin"};
    app.require_subcommand(1);
    app.set_version_flag("--version", DENGUE_VERSION);

    CommonOptions common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_file, "JSON config file");
        add_config_flag(sub, common, "--store", "store", "Store file, or :memory: (env DENGUE_STORE)");
    };

    // serve
    auto* serve = app.add_subcommand("serve", "Run the JSON API server until SIGINT/SIGTERM");
    add_common(serve);
    add_config_flag(serve, common, "--listen", "listen", "host:port (env DENGUE_LISTEN)");
    add_config_flag(serve, common, "--token-lifetime-hours", "token_lifetime_hours", "Login token lifetime");
    add_config_flag(serve, common, "--hotspot-radius-m", "hotspot_radius_m", "Default hotspot linking radius");
    add_config_flag(serve, common, "--site-radius-m", "site_radius_m", "Default infection-site radius");
    add_config_flag(serve, common, "--min-cases", "min_cases", "Default hotspot minimum size");
    add_config_flag(serve, common, "--rate-limit", "rate_limit_per_minute", "Requests per token per minute (0 = off)");
    add_config_flag(serve, common, "--web-root", "web_root", "Directory served at / (dashboard build)");

    // seed
    auto* seed = app.add_subcommand("seed", "Load a deterministic demo outbreak and optionally an operator account");
    add_common(seed);
    std::uint64_t seed_value = 42;
    std::string operator_email, operator_password;
    seed->add_option("--seed", seed_value, "RNG seed");
    seed->add_option("--operator-email", operator_email, "Create an operator with this email");
    seed->add_option("--operator-password", operator_password, "Password for the operator account");

    // simulate-outbreak
    auto* simulate = app.add_subcommand("simulate-outbreak", "Plant Gaussian case clusters and print ground truth");
    add_common(simulate);
    ops::OutbreakParams params;
    std::string bbox_text, anchor_text, truth_path;
    simulate->add_option("--seed", params.seed, "RNG seed")->capture_default_str();
    simulate->add_option("--users", params.users, "User count (>= cases)")->capture_default_str();
    simulate->add_option("--cases", params.cases, "Total case count")->capture_default_str();
    simulate->add_option("--bbox", bbox_text, "min_lat,min_lon,max_lat,max_lon (default Viti Levu)");
    simulate->add_option("--hotspots", params.hotspot_count, "Planted cluster count")->capture_default_str();
    simulate->add_option("--cluster-size", params.cluster_size, "Cases per planted cluster")->capture_default_str();
    simulate->add_option("--hotspot-radius-m", params.hotspot_radius_m, "Cluster radius (sigma = radius / 3)")
        ->capture_default_str();
    simulate->add_option("--trace-fraction", params.trace_fraction, "Share of reporters given traces")
        ->capture_default_str();
    simulate->add_option("--anchor", anchor_text, "Latest report time, RFC 3339 (default 2025-01-01T00:00:00Z)");
    simulate->add_option("--ground-truth", truth_path, "Also write ground truth JSON to this file");

    // export
    auto* exp = app.add_subcommand("export", "Write located cases and hotspots as GeoJSON or CSV");
    add_common(exp);
    std::string export_bbox, export_from, export_to, out_path, format = "geojson";
    ops::ExportQuery query;
    exp->add_option("--bbox", export_bbox, "min_lat,min_lon,max_lat,max_lon (default world)");
    exp->add_option("--from", export_from, "Earliest reported_at, RFC 3339");
    exp->add_option("--to", export_to, "Latest reported_at, RFC 3339");
    exp->add_option("--out", out_path, "Output file (default stdout)");
    exp->add_option("--format", format, "geojson or csv")->check(CLI::IsMember({"geojson", "csv"}));
    exp->add_option("--radius-m", query.hotspot_radius_m, "Hotspot linking radius")->capture_default_str();
    exp->add_option("--min-cases", query.min_cases, "Hotspot minimum size")->capture_default_str();
    exp->add_flag("!--no-hotspots", query.include_hotspots, "Omit hotspot features");

    // grant-role
    auto* grant = app.add_subcommand("grant-role", "Set a user's role");
    add_common(grant);
    std::string grant_email, role_text;
    grant->add_option("--email", grant_email, "Account email")->required();
    grant->add_option("--role", role_text, "patient or operator")->required()->check(CLI::IsMember({"patient", "operator"}));

    // link-phone
    auto* link = app.add_subcommand("link-phone", "Link an E.164 phone number to an account for SMS");
    add_common(link);
    std::string link_email, phone;
    link->add_option("--email", link_email, "Account email")->required();
    link->add_option("--phone", phone, "E.164 number, e.g. +6799991234")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*serve) return run_serve(common);

        auto cfg = resolve(common);
        auto store = store::open_store(cfg.store_path);

        if (*seed) {
            ops::OutbreakParams demo;
            demo.seed = seed_value;
            auto outbreak = ops::simulate_outbreak(demo);
            ops::populate(*store, outbreak);
            if (!operator_email.empty()) {
                if (operator_password.size() < kMinPasswordLength)
                    throw ValidationError("operator-password", "operator password must be at least 8 characters");
                UserProfile op;
                op.name = "Operator";
                op.email = operator_email;
                op.date_of_birth = Date{std::chrono::year{1980}, std::chrono::January, std::chrono::day{1}};
                op.height_cm = 170;
                op.weight_kg = 70;
                op.created_at = now_utc();
                op.role = Role::Operator;
                validate_profile(op, date_of(now_utc()));
                op.password_digest = api::hash_password(operator_password);
                store->create_user(op);
            }
            std::cout << "seeded " << outbreak.users.size() << " users, " << outbreak.cases.size() << " cases, "
                      << outbreak.traces.size() << " traces" << std::endl;
            return 0;
        }

        if (*simulate) {
            if (!bbox_text.empty()) params.bbox = ops::parse_bbox(bbox_text);
            if (!anchor_text.empty()) {
                auto anchor = parse_rfc3339(anchor_text);
                if (!anchor) throw ValidationError("anchor", "anchor must be an RFC 3339 timestamp");
                params.anchor = *anchor;
            }
            auto outbreak = ops::simulate_outbreak(params);
            ops::populate(*store, outbreak);
            auto truth = ops::ground_truth(params, outbreak).dump(2);
            std::cout << truth << std::endl;
            if (!truth_path.empty()) {
                std::ofstream out(truth_path);
                if (!(out << truth << '\n')) throw std::runtime_error("cannot write " + truth_path);
            }
            return 0;
        }

        if (*exp) {
            if (!export_bbox.empty()) query.bbox = ops::parse_bbox(export_bbox);
            auto time_arg = [](const std::string& text, const char* name, Timestamp fallback) {
                if (text.empty()) return fallback;
                auto t = parse_rfc3339(text);
                if (!t) throw ValidationError(name, std::string(name) + " must be an RFC 3339 timestamp");
                return *t;
            };
            query.from = time_arg(export_from, "from", query.from);
            query.to = time_arg(export_to, "to", query.to);
            const std::string text =
                format == "csv" ? ops::export_csv(*store, query) : ops::export_geojson(*store, query).dump(2) + "\n";
            if (out_path.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(out_path, std::ios::binary);
                if (!(out << text)) throw std::runtime_error("cannot write " + out_path);
            }
            return 0;
        }

        if (*grant) {
            auto user = require_user(*store, grant_email);
            store->set_role(user.user_id, *role_from_string(role_text));
            std::cout << grant_email << " is now " << role_text << std::endl;
            return 0;
        }

        if (*link) {
            if (!is_valid_phone(phone)) throw ValidationError("phone", "phone must be in E.164 form, e.g. +6799991234");
            auto user = require_user(*store, link_email);
            store->link_phone(user.user_id, phone);
            std::cout << phone << " linked to " << link_email << std::endl;
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitRuntime;
    }
    return kExitUsage;
}
