#pragma once

/// \file
/// \brief Deterministic random streams. The engine is std::mt19937_64 (whose
/// sequence the standard pins down exactly); all distributions are implemented
/// here rather than via <random> adaptors, whose output is
/// implementation-defined and would break cross-platform reproducibility.

#include <cstdint>
#include <random>

#include "conehull/geometry.hpp"

namespace conehull {

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1].
    double uniform01_open_low() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; consumes exactly two uniforms.
    double normal01() {
        const double u1 = uniform01_open_low();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * kPi * u2);
    }

    UnitVec unit_vector() { return UnitVec::from_angle(uniform(0.0, 2 * kPi)); }

    Point point_in(const Frame& f) {
        const double x = uniform(f.xmin, f.xmax);
        const double y = uniform(f.ymin, f.ymax);
        return {x, y};
    }

    /// Mixes a master seed with stream indices (cell, run, trial...) into an
    /// independent-looking child seed, deterministically.
    static std::uint64_t derive(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
        return mix(mix(master ^ a) ^ b);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        // splitmix64 finalizer
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
};

/// Halton low-discrepancy sequence member, index >= 1.
inline double halton(std::uint32_t index, std::uint32_t base) {
    double f = 1.0;
    double r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

}  // namespace conehull
