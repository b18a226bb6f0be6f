#pragma once

#include <string>
#include <string_view>

namespace dengue::api {

inline constexpr int kDefaultPbkdf2Iterations = 100'000;

/// Salted PBKDF2-HMAC-SHA256 digest:
/// "pbkdf2_sha256$<iterations>$<salt hex>$<hash hex>".
std::string hash_password(std::string_view password, int iterations = kDefaultPbkdf2Iterations);

/// Constant-time comparison against a digest produced by hash_password.
/// Malformed digests never verify.
bool verify_password(std::string_view password, std::string_view digest);

}  // namespace dengue::api
