#pragma once

// Deterministic pseudo-random generation shared by neuron subsampling and the
// synthetic cohort generators. Every algorithm here is fully specified so that
// other implementations can reproduce the exact streams:
//
//   * splitmix64 (Steele, Lea, Flood) expands a 64-bit seed into state words.
//   * xoshiro256** (Blackman, Vigna) is the generator proper.
//   * bounded(r) draws x = next() until x >= (2^64 - r) mod r, returns x mod r.
//   * uniform01_open() = ((next() >> 11) + 1) * 2^-53, in (0, 1].
//   * uniform01() = (next() >> 11) * 2^-53, in [0, 1).
//   * normal() is Box-Muller, cosine branch only:
//       u1 = uniform01_open(), u2 = uniform01(),
//       z  = sqrt(-2 ln u1) * cos(2 pi u2).

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace nntopo {

inline constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seed for an independent sub-stream, e.g. one synthetic model per index.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t s = stream;
    const std::uint64_t mixed = splitmix64_next(s);
    std::uint64_t t = seed ^ mixed;
    return splitmix64_next(t);
}

class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit constexpr Xoshiro256(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64_next(sm);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    constexpr result_type operator()() noexcept { return next(); }

    constexpr std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform integer in [0, range). range must be > 0.
    constexpr std::uint64_t bounded(std::uint64_t range) noexcept {
        const std::uint64_t threshold = (0 - range) % range;
        for (;;) {
            const std::uint64_t x = next();
            if (x >= threshold) return x % range;
        }
    }

    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform01_open() noexcept {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    double normal() noexcept {
        const double u1 = uniform01_open();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

}  // namespace nntopo
