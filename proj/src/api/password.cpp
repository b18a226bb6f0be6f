#include "dengue/api/password.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <array>
#include <charconv>
#include <stdexcept>
#include <vector>

namespace dengue::api {

namespace {

constexpr std::string_view kScheme = "pbkdf2_sha256";
constexpr std::size_t kSaltBytes = 16;
constexpr std::size_t kHashBytes = 32;

std::string to_hex(const unsigned char* data, std::size_t n) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(n * 2, '0');
    for (std::size_t i = 0; i < n; ++i) {
        out[2 * i] = kDigits[data[i] >> 4];
        out[2 * i + 1] = kDigits[data[i] & 0x0f];
    }
    return out;
}

bool from_hex(std::string_view hex, std::vector<unsigned char>& out) {
    if (hex.size() % 2 != 0) return false;
    out.resize(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        unsigned value = 0;
        auto [p, ec] = std::from_chars(hex.data() + 2 * i, hex.data() + 2 * i + 2, value, 16);
        if (ec != std::errc() || p != hex.data() + 2 * i + 2) return false;
        out[i] = static_cast<unsigned char>(value);
    }
    return true;
}

std::array<unsigned char, kHashBytes> derive(std::string_view password, const unsigned char* salt, std::size_t salt_len,
                                             int iterations) {
    std::array<unsigned char, kHashBytes> out{};
    if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()), salt, static_cast<int>(salt_len),
                          iterations, EVP_sha256(), static_cast<int>(out.size()), out.data()) != 1)
        throw std::runtime_error("PBKDF2 failed");
    return out;
}

}  // namespace

std::string hash_password(std::string_view password, int iterations) {
    if (iterations < 1) throw std::invalid_argument("iterations must be positive");
    std::array<unsigned char, kSaltBytes> salt{};
    if (RAND_bytes(salt.data(), static_cast<int>(salt.size())) != 1) throw std::runtime_error("RAND_bytes failed");
    auto hash = derive(password, salt.data(), salt.size(), iterations);
    return std::string(kScheme) + "$" + std::to_string(iterations) + "$" + to_hex(salt.data(), salt.size()) + "$" +
           to_hex(hash.data(), hash.size());
}

bool verify_password(std::string_view password, std::string_view digest) {
    auto next = [&digest]() {
        auto pos = digest.find('$');
        auto part = digest.substr(0, pos);
        digest = pos == std::string_view::npos ? std::string_view{} : digest.substr(pos + 1);
        return part;
    };
    if (next() != kScheme) return false;
    auto iter_text = next();
    int iterations = 0;
    auto [p, ec] = std::from_chars(iter_text.data(), iter_text.data() + iter_text.size(), iterations);
    if (ec != std::errc() || p != iter_text.data() + iter_text.size() || iterations < 1) return false;
    std::vector<unsigned char> salt, expected;
    if (!from_hex(next(), salt) || !from_hex(digest, expected) || expected.size() != kHashBytes) return false;
    auto actual = derive(password, salt.data(), salt.size(), iterations);
    return CRYPTO_memcmp(actual.data(), expected.data(), kHashBytes) == 0;
}

}  // namespace dengue::api
