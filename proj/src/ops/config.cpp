#include "dengue/ops/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "dengue/core/errors.hpp"

namespace dengue::ops {

namespace {

const std::set<std::string> kKeys{"listen",        "store",     "token_lifetime_hours", "hotspot_radius_m",
                                  "site_radius_m", "min_cases", "rate_limit_per_minute", "web_root"};

double positive_number(const std::string& key, const std::string& text) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size() || !std::isfinite(v) || v <= 0.0)
        throw ValidationError(key, key + " must be a positive number");
    return v;
}

std::size_t count(const std::string& key, const std::string& text) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size()) throw ValidationError(key, key + " must be an integer");
    return v;
}

void apply_listen(ServiceConfig& cfg, const std::string& text) {
    auto colon = text.rfind(':');
    if (colon == std::string::npos || colon == 0) throw ValidationError("listen", "listen must be host:port");
    int port = 0;
    auto digits = text.substr(colon + 1);
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
    if (ec != std::errc() || p != digits.data() + digits.size() || port < 0 || port > 65535)
        throw ValidationError("listen", "listen port must be 0-65535");
    cfg.host = text.substr(0, colon);
    cfg.port = port;
}

}  // namespace

std::string env_name(const std::string& key) {
    std::string out = "DENGUE_";
    for (char c : key) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

ConfigLayer env_layer(const std::function<const char*(const char*)>& getenv) {
    ConfigLayer layer;
    for (const auto& key : kKeys)
        if (const char* v = getenv(env_name(key).c_str()); v && *v) layer[key] = v;
    return layer;
}

ConfigLayer load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
    auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw std::runtime_error("config file '" + path + "' is not a JSON object");
    ConfigLayer layer;
    for (const auto& [key, value] : j.items()) {
        if (value.is_string())
            layer[key] = value.get<std::string>();
        else if (value.is_number() || value.is_boolean())
            layer[key] = value.dump();
        else
            throw std::runtime_error("config key '" + key + "' must be a scalar");
    }
    return layer;
}

ServiceConfig resolve_config(const ConfigLayer& flags, const ConfigLayer& env, const ConfigLayer& file) {
    ConfigLayer merged = file;
    for (const auto& [k, v] : env) merged[k] = v;
    for (const auto& [k, v] : flags) merged[k] = v;

    ServiceConfig cfg;
    for (const auto& [key, value] : merged) {
        if (!kKeys.contains(key)) throw ValidationError(key, "unknown configuration key '" + key + "'");
        if (key == "listen") apply_listen(cfg, value);
        else if (key == "store") cfg.store_path = value;
        else if (key == "token_lifetime_hours") cfg.token_lifetime_hours = positive_number(key, value);
        else if (key == "hotspot_radius_m") cfg.hotspot_radius_m = positive_number(key, value);
        else if (key == "site_radius_m") cfg.site_radius_m = positive_number(key, value);
        else if (key == "min_cases") {
            cfg.min_cases = count(key, value);
            if (cfg.min_cases < 2) throw ValidationError(key, "min_cases must be at least 2");
        } else if (key == "rate_limit_per_minute") cfg.rate_limit_per_minute = count(key, value);
        else if (key == "web_root") cfg.web_root = value;
    }
    if (cfg.store_path.empty()) throw ValidationError("store", "store path must not be empty");
    return cfg;
}

}  // namespace dengue::ops
