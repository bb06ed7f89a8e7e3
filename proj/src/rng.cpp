#include "irsa/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace irsa {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

SplitMix64 device_stream(std::uint64_t seed, std::uint64_t frame, std::uint64_t device) {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h ^ (frame * 0x9e3779b97f4a7c15ULL));
    h = mix64(h ^ (device * 0xbf58476d1ce4e5b9ULL));
    return SplitMix64{h};
}

SplitMix64 named_stream(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t h = mix64(seed ^ 0xbb67ae8584caa73bULL);
    h = mix64(h ^ (tag * 0x94d049bb133111ebULL));
    return SplitMix64{h};
}

int binomial(SplitMix64& rng, int n, double p) {
    if (n <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    // Keep the success probability at or below 1/2 so the k = 0 pmf cannot
    // underflow for any frame length we run; sample the complement otherwise.
    if (p > 0.5) return n - binomial(rng, n, 1.0 - p);
    if (n > 1000) {
        // Inversion needs (1-p)^n representable; beyond this, count directly.
        int count = 0;
        for (int i = 0; i < n; ++i)
            if (rng.next_double() < p) ++count;
        return count;
    }
    const double u = rng.next_double();
    const double odds = p / (1.0 - p);
    double pmf = 1.0;
    for (int i = 0; i < n; ++i) pmf *= 1.0 - p;
    double cdf = pmf;
    int k = 0;
    while (u >= cdf && k < n) {
        ++k;
        pmf *= odds * static_cast<double>(n - k + 1) / static_cast<double>(k);
        cdf += pmf;
    }
    return k;
}

double standard_normal(SplitMix64& rng) {
    const double u1 = 1.0 - rng.next_double();  // (0, 1]
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<int> sample_without_replacement(SplitMix64& rng, int n, int k) {
    // Floyd's algorithm: k iterations, no auxiliary n-sized state.
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int j = n - k; j < n; ++j) {
        int t = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(j) + 1));
        if (std::find(out.begin(), out.end(), t) != out.end())
            out.push_back(j);
        else
            out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace irsa
