#pragma once

#include <cmath>
#include <cstdint>

#include "expsum/types.hpp"

namespace expsum {

/// SplitMix64 stream. Chosen over std::mt19937 + std:: distributions because
/// every sampled value must be bit-identical across platforms and runs.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in (0,1); never returns 0 so logs are safe.
    double uniform() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }
};

/// Decorrelated child seed for an indexed substream (trial, batch, ...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g(seed ^ (0xd1342543de82ef95ULL * (stream + 1)));
    return g.next();
}

/// Standard complex Gaussian (E|c|^2 = 1) via the polar transform.
inline Complex sample_complex_gaussian(SplitMix64& g) {
    double u1 = g.uniform();
    double u2 = g.uniform();
    double r = std::sqrt(-std::log(u1));
    return r * Complex(std::cos(2.0 * M_PI * u2), std::sin(2.0 * M_PI * u2));
}

/// Van der Corput radical inverse; bases 2,3,5,7 give the 4-d Halton sequence.
inline double radical_inverse(std::uint64_t index, std::uint32_t base) {
    double inv = 1.0 / base, f = inv, x = 0.0;
    while (index > 0) {
        x += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return x;
}

inline constexpr std::uint32_t kHaltonBases[4] = {2, 3, 5, 7};

}  // namespace expsum
