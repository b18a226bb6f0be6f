#include <openssl/evp.h>
#include <openssl/rand.h>

#include <array>
#include <string>
#include <vector>

#include "dengue/core/errors.hpp"
#include "dengue/store/store.hpp"

namespace dengue::store {

namespace {

std::string to_hex(const unsigned char* data, std::size_t n) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(n * 2, '0');
    for (std::size_t i = 0; i < n; ++i) {
        out[2 * i] = kDigits[data[i] >> 4];
        out[2 * i + 1] = kDigits[data[i] & 0x0f];
    }
    return out;
}

}  // namespace

std::string random_hex(std::size_t bytes) {
    std::vector<unsigned char> buf(bytes);
    if (RAND_bytes(buf.data(), static_cast<int>(buf.size())) != 1) throw StorageError("RAND_bytes failed");
    return to_hex(buf.data(), buf.size());
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw StorageError("sha256 failed");
    return to_hex(digest.data(), len);
}

}  // namespace dengue::store
