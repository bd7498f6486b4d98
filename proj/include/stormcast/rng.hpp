#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace stormcast {

// SplitMix64. Chosen over <random> engines+distributions so that seeded runs
// are byte-identical across standard libraries and platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n). Modulo bias is irrelevant here; determinism is the contract.
    uint64_t next_below(uint64_t n) { return n ? next_u64() % n : 0; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    uint64_t state_;
};

// One global seed deterministically derives per-stage seeds, so changing one
// stage's draws never perturbs another's.
uint64_t derive_seed(uint64_t global_seed, std::string_view stage);

} // namespace stormcast
