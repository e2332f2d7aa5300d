#pragma once

#include <cstdint>
#include <string_view>

namespace zgof {

// 64-bit avalanche finalizer (the splitmix64 output mix). Used both for
// generator output and for deriving stream seeds from key tuples.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// splitmix64: a counter-style generator. The state advances by a fixed
// increment, so the i-th output is a pure function of (seed, i); there is
// no sequential mixing that could couple draws to scheduling order.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// A family of reproducible random streams. The stream that feeds replicate
// `index` is derived purely from (seed, role, sub, n, index), never from
// execution order, so a simulation gives bit-identical results at any
// thread count. `role` separates null-hypothesis sets from alternative
// sets; `sub` identifies the statistic (null sets) or the sampled
// distribution's label hash (alternative sets).
struct StreamFamily {
    std::uint64_t seed = 0;
    std::uint64_t role = 0;
    std::uint64_t sub = 0;
    std::uint64_t n = 0;

    SplitMix64 replicate(std::uint64_t index) const noexcept {
        constexpr std::uint64_t gamma = 0x9E3779B97F4A7C15ULL;
        std::uint64_t h = 0x243F6A8885A308D3ULL ^ seed;
        h = mix64(h + gamma + role);
        h = mix64(h + gamma * 2 + sub);
        h = mix64(h + gamma * 3 + n);
        h = mix64(h + gamma * 4 + index);
        return SplitMix64(h);
    }
};

// FNV-1a label hash. Alternative streams are keyed by label rather than by
// list position, so reordering the alternatives of a study does not change
// any per-alternative estimate.
constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace zgof
