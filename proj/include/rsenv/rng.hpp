#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace rsenv {

// All randomness in the library flows through one named, portable generator
// so that a (manifest, seed) pair replays bit-for-bit on any platform.

inline constexpr std::string_view kPrngName = "xoshiro256**";

/// One step of the splitmix64 sequence; also used as a mixing finalizer.
constexpr std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256** 1.0 (Blackman & Vigna), seeded from a 64-bit value via splitmix64.
class Xoshiro256StarStar {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256StarStar(std::uint64_t seed = 0) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t next() {
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

    /// Unbiased draw in [0, n) by rejection; n must be > 0.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    /// Uniform double in [0, 1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // UniformRandomBitGenerator interface.
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~0ULL; }
    std::uint64_t operator()() { return next(); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::array<std::uint64_t, 4> state_{};
};

/// 64-bit FNV-1a over a byte string.
constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Seed for a named component stream. Streams are derived by hashing
/// (seed, component-name), so adding a component never perturbs another's
/// stream.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view component) {
    std::uint64_t mixed = seed ^ fnv1a64(component);
    return splitmix64_next(mixed);
}

inline Xoshiro256StarStar derive_stream(std::uint64_t seed, std::string_view component) {
    return Xoshiro256StarStar(derive_seed(seed, component));
}

}  // namespace rsenv
