#pragma once

#include <cstdint>
#include <initializer_list>

namespace pms {

/// SplitMix64 (Steele, Lea, Flood 2014). The state is a plain counter advanced
/// by the golden gamma, so output depends only on the seed and the draw index.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform integer on [lo, hi], rejection sampled (no modulo bias).
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t width = static_cast<std::uint64_t>(hi - lo) + 1;
        if (width == 0) return static_cast<std::int64_t>(next());  // full 64-bit range
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % width;
        std::uint64_t draw = next();
        while (draw >= limit) draw = next();
        return lo + static_cast<std::int64_t>(draw % width);
    }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Order-sensitive combination of 64-bit words into one seed.
    static std::uint64_t combine(std::initializer_list<std::uint64_t> words) {
        std::uint64_t h = 0x6A09E667F3BCC909ULL;
        for (std::uint64_t w : words) h = mix(h ^ mix(w + 0x9E3779B97F4A7C15ULL));
        return h;
    }

private:
    std::uint64_t state_;
};

}  // namespace pms
