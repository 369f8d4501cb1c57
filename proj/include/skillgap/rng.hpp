#ifndef SKILLGAP_RNG_HPP
#define SKILLGAP_RNG_HPP

#include <cstdint>

// Deterministic PRNG used everywhere randomness is needed. std::mt19937_64
// would be portable, but the standard distributions are not, so sampling is
// done by hand on top of a fixed generator (see docs/determinism.md).
// Algorithms: splitmix64 (Steele, Lea, Flood 2014) for seeding/derivation,
// xoshiro256** (Blackman, Vigna 2018) for the stream.

namespace skillgap {

constexpr std::uint64_t kSeedMixConstant = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += kSeedMixConstant);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stable child seed for stream `tag` (per-K sweep chains, per-document
// inference). Children of distinct tags are decorrelated.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag) {
    std::uint64_t s = root ^ (kSeedMixConstant * (tag + 1));
    splitmix64(s);
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0,1), 53-bit mantissa.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0,n). Fixed-point multiply keeps this portable
    // (no modulo bias, no division loop whose count depends on the draw).
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace skillgap

#endif
