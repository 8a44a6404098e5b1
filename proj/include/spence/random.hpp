#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "spence/error.hpp"

namespace spence {

/// SplitMix64 (Steele, Lea, Flood 2014). Chosen because it is short enough to
/// reimplement bit-for-bit anywhere:
///
///     state += 0x9E3779B97F4A7C15
///     z = state
///     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///     return z ^ (z >> 31)
///
/// All arithmetic is modulo 2^64. The initial state is the seed.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t operator()() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

    /// Uniform integer in [0, bound) by rejection: draw x until
    /// x < 2^64 - (2^64 mod bound), then return x mod bound.
    constexpr std::uint64_t below(std::uint64_t bound) {
        if (bound == 0)
            throw PreconditionError("below(0)");
        const std::uint64_t limit = max() - (max() % bound + 1) % bound; // largest accepted value
        for (;;) {
            std::uint64_t x = (*this)();
            if (x <= limit)
                return x % bound;
        }
    }

private:
    std::uint64_t state_;
};

/// Seeded permutation of 1..n.
///
/// Starts from the identity [1, 2, ..., n] and runs Fisher-Yates from the
/// back: for i = n-1 down to 1, swap positions i and SplitMix64(seed).below(i + 1).
inline std::vector<std::int32_t> permute(std::int32_t n, std::uint64_t seed) {
    if (n < 1)
        throw PreconditionError("permute: n must be >= 1");
    std::vector<std::int32_t> out(static_cast<std::size_t>(n));
    std::iota(out.begin(), out.end(), 1);
    SplitMix64 rng(seed);
    for (std::size_t i = out.size() - 1; i > 0; --i) {
        auto j = static_cast<std::size_t>(rng.below(i + 1));
        std::swap(out[i], out[j]);
    }
    return out;
}

} // namespace spence
