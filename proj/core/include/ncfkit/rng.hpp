#pragma once

#include <cstdint>

namespace ncfkit {

// splitmix64: 64-bit state, increment 0x9E3779B97F4A7C15. Chosen so seeded
// streams are reproducible from the documented algorithm alone.
class splitmix64 {
public:
    explicit splitmix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Unbiased draw from [0, bound) by rejection.
    uint64_t below(uint64_t bound) {
        const uint64_t threshold = (0 - bound) % bound; // 2^64 mod bound
        for (;;) {
            const uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

private:
    uint64_t state_;
};

} // namespace ncfkit
