#include "stormcast/fingerprint.hpp"

#include <cstdio>
#include <fstream>

#include "stormcast/errors.hpp"
#include "stormcast/rng.hpp"

namespace stormcast {

uint64_t fnv1a64(std::string_view bytes) {
    Fnv1a h;
    h.update(bytes);
    return h.digest();
}

uint64_t fingerprint_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read file: " + path.string());
    Fnv1a h;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        h.update(buf, static_cast<size_t>(in.gcount()));
    return h.digest();
}

std::string to_hex(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

uint64_t derive_seed(uint64_t global_seed, std::string_view stage) {
    Fnv1a h;
    h.update(&global_seed, sizeof global_seed);
    h.update(stage);
    return h.digest();
}

} // namespace stormcast
