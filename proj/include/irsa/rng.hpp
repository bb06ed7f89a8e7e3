#pragma once

#include <cstdint>
#include <vector>

namespace irsa {

// Small, fast, seedable generator with a full 2^64 period. Every simulation
// draw flows through one of these so runs are reproducible bit-for-bit.
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n); n must be positive.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }
};

// Stationary avalanche mix used to derive independent stream states.
std::uint64_t mix64(std::uint64_t z);

// Independent stream per (seed, frame, device): reproducible under any
// parallel schedule because no stream depends on another's consumption.
SplitMix64 device_stream(std::uint64_t seed, std::uint64_t frame, std::uint64_t device);

// Named substream for non-device draws (e.g. optimizer restarts).
SplitMix64 named_stream(std::uint64_t seed, std::uint64_t tag);

// Binomial(n, p) sample by CDF inversion; consumes exactly one uniform.
int binomial(SplitMix64& rng, int n, double p);

// Standard normal via Box-Muller.
double standard_normal(SplitMix64& rng);

// Uniform k-subset of [0..n) via Floyd's algorithm, returned sorted.
std::vector<int> sample_without_replacement(SplitMix64& rng, int n, int k);

}  // namespace irsa
