#pragma once

#include <cstdint>

namespace minpower {

// splitmix64. Standard-library distributions are implementation-defined, so
// every stream that must reproduce byte-identical output (placement, phase
// offsets) goes through this generator instead.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1), 53 bits of entropy.
    double next_unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

// Stateless mix for deriving independent per-entity seeds from a run seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    SplitMix64 g(seed ^ (salt * 0xD1B54A32D192ED03ULL + 0x2545F4914F6CDD1DULL));
    return g.next();
}

} // namespace minpower
