#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace stormcast {

// FNV-1a, 64-bit. Provenance fingerprinting only, not cryptographic.
class Fnv1a {
public:
    void update(const void* data, size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < len; ++i) {
            hash_ ^= p[i];
            hash_ *= 0x100000001b3ULL;
        }
    }
    void update(std::string_view s) { update(s.data(), s.size()); }
    uint64_t digest() const { return hash_; }

private:
    uint64_t hash_ = 0xcbf29ce484222325ULL;
};

uint64_t fnv1a64(std::string_view bytes);
uint64_t fingerprint_file(const std::filesystem::path& path); // throws DataError if unreadable
std::string to_hex(uint64_t v);

} // namespace stormcast
