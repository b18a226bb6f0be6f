#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

namespace dengue::ops {

/// key -> raw value from one configuration source.
using ConfigLayer = std::map<std::string, std::string>;

/// Recognised keys, shared by flags, environment and config file:
///   listen, store, token_lifetime_hours, hotspot_radius_m, site_radius_m,
///   min_cases, rate_limit_per_minute, web_root
struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string store_path = "dengue.db";
    double token_lifetime_hours = 24.0;
    double hotspot_radius_m = 200.0;
    double site_radius_m = 100.0;
    std::size_t min_cases = 3;
    std::size_t rate_limit_per_minute = 60;
    std::string web_root;
};

/// Environment variable for a key: "store" -> "DENGUE_STORE".
std::string env_name(const std::string& key);

/// Collects DENGUE_* variables through `getenv`.
ConfigLayer env_layer(const std::function<const char*(const char*)>& getenv);

/// Reads a flat JSON object. Throws std::runtime_error if unreadable or malformed.
ConfigLayer load_config_file(const std::string& path);

/// flags > env > file > defaults. Throws ValidationError on a bad value or
/// an unknown key.
ServiceConfig resolve_config(const ConfigLayer& flags, const ConfigLayer& env, const ConfigLayer& file);

}  // namespace dengue::ops
