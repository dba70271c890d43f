#pragma once

#include <cstdint>
#include <limits>

namespace kaczmarz {

// SplitMix64: a counter advanced by a fixed odd increment, fed through a
// 64-bit finalizer. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : counter_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept {
        counter_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = counter_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Independent stream seeded from this one.
    SplitMix64 split() noexcept { return SplitMix64((*this)()); }

    std::uint64_t counter() const noexcept { return counter_; }

    bool operator==(const SplitMix64&) const = default;

private:
    std::uint64_t counter_;
};

}  // namespace kaczmarz
