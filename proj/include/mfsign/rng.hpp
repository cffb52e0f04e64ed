#pragma once

#include <cstdint>
#include <random>

#include "mfsign/arith.hpp"

// Deterministic sampling helpers.  Everything goes through mt19937_64 word
// draws only, so streams are reproducible across platforms and standard
// library versions (std::uniform_real_distribution makes no such promise).

namespace mfsign {
namespace rng {

// 53 uniform random bits as a double in [0, 1).
inline double rand53(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Draw from the semicircle density (2/pi) sqrt(1 - x^2) on [-1, 1] by
// rejection from the bounding square; acceptance rate pi/4.
inline double semicircle(std::mt19937_64& g) {
    while (true) {
        double x = 2.0 * rand53(g) - 1.0;
        double y = rand53(g);
        if (y * y <= 1.0 - x * x) return x;
    }
}

// Uniform Int in [0, range): assemble 64-bit words, reject overshoot.
inline Int uniform_int(std::mt19937_64& g, const Int& range) {
    std::size_t bits = 0;
    Int r = range;
    while (r > 0) { ++bits; r >>= 1; }
    std::size_t words = (bits + 63) / 64;
    while (true) {
        Int v = 0;
        for (std::size_t i = 0; i < words; ++i) {
            v <<= 64;
            v += g();
        }
        v >>= static_cast<int>(words * 64 - bits);
        if (v < range) return v;
    }
}

} // namespace rng
} // namespace mfsign
