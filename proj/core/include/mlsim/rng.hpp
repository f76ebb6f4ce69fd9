#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace mlsim::rng {

// All randomness flows from one master seed through named sub-streams, so a
// run is reproducible for any parallel schedule. std::mt19937_64 is the
// engine; the samplers below are written out explicitly because the standard
// <random> distributions are not bit-portable across library implementations.

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Seed for sub-stream `tag` at position (i, j) under `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t i = 0, std::uint64_t j = 0) {
    std::uint64_t h = splitmix64(master ^ hash_tag(tag));
    h = splitmix64(h ^ i);
    return splitmix64(h ^ j);
}

inline Engine make_engine(std::uint64_t master, std::string_view tag,
                          std::uint64_t i = 0, std::uint64_t j = 0) {
    return Engine(derive_seed(master, tag, i, j));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Engine& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n). Rejection keeps the draw unbiased.
inline std::uint64_t uniform_below(Engine& g, std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = g();
    } while (x >= limit);
    return x % n;
}

/// Standard normal via the Marsaglia polar method (one value per call).
inline double normal(Engine& g) {
    for (;;) {
        const double u = 2.0 * uniform01(g) - 1.0;
        const double v = 2.0 * uniform01(g) - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

/// Gamma(shape, scale=1), Marsaglia-Tsang; shapes below 1 use the boost
/// G(a) = G(a+1) * U^(1/a).
inline double gamma(Engine& g, double shape) {
    if (shape < 1.0) {
        const double u = uniform01(g);
        return gamma(g, shape + 1.0) * std::pow(u > 0.0 ? u : 0x1.0p-53, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal(g);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01(g);
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

/// Poisson(mean) by summing exponential gaps; exact for any finite mean,
/// O(mean) draws. Rates here stay small, so this is fast enough.
inline std::uint64_t poisson(Engine& g, double mean) {
    if (!(mean > 0.0)) return 0;
    double t = 0.0;
    std::uint64_t k = 0;
    for (;;) {
        double u = uniform01(g);
        if (u <= 0.0) u = 0x1.0p-53;
        t -= std::log(u);
        if (t > mean) return k;
        ++k;
    }
}

/// Negative binomial with the given mean and dispersion (gamma shape);
/// dispersion -> infinity recovers Poisson.
inline std::uint64_t negative_binomial(Engine& g, double mean, double dispersion) {
    const double mix = gamma(g, dispersion) / dispersion;
    return poisson(g, mean * mix);
}

} // namespace mlsim::rng
