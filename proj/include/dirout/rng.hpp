#pragma once

// Deterministic random number generation. All randomness in the library flows
// from a single master seed; independent streams (per gridpoint, per replicate)
// are derived with SplitMix64 so results are reproducible bit-for-bit across
// platforms and thread counts.
//
// Distribution sampling is implemented here rather than with <random>'s
// distribution classes because the standard does not pin down their algorithms;
// this keeps output identical across standard library implementations.

#include <cmath>
#include <cstdint>
#include <random>

namespace dirout {

// One step of the SplitMix64 sequence starting at `state`.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seed for logical stream `stream` under master seed `master`. Streams with
// different indices are decorrelated even for adjacent indices.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s = master ^ (0xD1B54A32D192ED03ULL * (stream + 1));
    std::uint64_t b = splitmix64(s);
    return a ^ (b + 0x9E3779B97F4A7C15ULL * stream);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on [0, 1): top 53 bits of the engine output.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1): rejects exact zeros (needed ahead of log/quantile calls).
    double uniform01_open() {
        for (;;) {
            double u = uniform01();
            if (u > 0.0) return u;
        }
    }

    // Standard normal via the Marsaglia polar method, one spare cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    double lognormal() { return std::exp(normal()); }

    // Uniform index in [0, n) without modulo bias.
    std::size_t uniform_index(std::size_t n) {
        const std::uint64_t bound = n;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        for (;;) {
            std::uint64_t x = eng_();
            if (x < limit) return static_cast<std::size_t>(x % bound);
        }
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace dirout
