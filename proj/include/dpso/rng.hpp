#pragma once

#include <cstdint>
#include <limits>

namespace dpso {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// Seed of repetition `index` under a master seed:
///   substream_seed(s, r) = mix64(mix64(s) + (r + 1) * 0x9e3779b97f4a7c15)
/// Repetitions can therefore run in any order or on any thread.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
    return mix64(mix64(seed) + (index + 1) * kGoldenGamma);
}

/// Counter-based generator: the k-th output is mix64(seed + k * gamma).
/// Satisfies UniformRandomBitGenerator; the helpers below avoid the
/// implementation-defined std distributions so streams are portable.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) noexcept : seed_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return mix64(seed_ + (++counter_) * kGoldenGamma); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on {0, ..., bound-1}; bound must be positive. Lemire's
    /// multiply-and-reject method, unbiased.
    std::uint64_t below(std::uint64_t bound) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

} // namespace dpso
