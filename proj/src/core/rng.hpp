#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace lvef {

// Portable seeded generator used everywhere randomness is needed, so results
// reproduce across platforms and can be re-derived by other implementations.
//
// Stream generator: xorshift64* (Vigna 2016),
//   x ^= x >> 12; x ^= x << 25; x ^= x >> 27; output = x * 0x2545F4914F6CDD1D.
// A zero seed is replaced by 0x9E3779B97F4A7C15.
//
// Doubles: next() >> 11 scaled by 2^-53, uniform in [0, 1).
// Bounded ints: next() % n.
// Substream i of seed s: state = splitmix64(s + (i + 1) * 0x9E3779B97F4A7C15).
class Rng {
public:
    explicit Rng(std::uint64_t seed)
        : state_(seed ? seed : 0x9E3779B97F4A7C15ULL) {}

    std::uint64_t next() {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1DULL;
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, n). n must be > 0.
    std::uint64_t next_index(std::uint64_t n) {
        return next() % n;
    }

    // Standard normal via Box-Muller; consumes exactly two draws per call.
    double next_gaussian() {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // Independent deterministic substream of (seed, index).
    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        return Rng(splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15ULL));
    }

private:
    std::uint64_t state_;
};

// Seeded in-place Fisher-Yates shuffle.
template <typename Index>
void shuffle_indices(std::vector<Index>& indices, Rng& rng) {
    for (std::size_t i = indices.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_index(i));
        std::swap(indices[i - 1], indices[j]);
    }
}

} // namespace lvef
