#pragma once

#include <cstdint>

namespace nhse {

/// SplitMix64 finaliser. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Purpose tags keep the disorder streams of one trial from aliasing.
enum class StreamTag : std::uint64_t {
    trial = 0x747269616cULL,         // "trial"
    spacing = 0x73706163696e67ULL,   // "spacing"
    gauge = 0x6761756765ULL,         // "gauge"
    entrywise = 0x656e747279ULL,     // "entry"
    start_vector = 0x737461727456ULL // "startV"
};

/// Key for the stream identified by (seed, tag, index).
constexpr std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag,
                                    std::uint64_t index) noexcept {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ static_cast<std::uint64_t>(tag));
    return mix64(h ^ mix64(index));
}

/// Counter-based generator: draw k depends only on (key, k), so any subset
/// of draws can be evaluated independently and in any order.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

    constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
        return mix64(key_ ^ mix64(counter + 0x632BE59BD9B4E019ULL));
    }

    /// Uniform on [0, 1) with 53 random bits.
    constexpr double uniform(std::uint64_t counter) const noexcept {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    /// Uniform on [-half_width, half_width).
    constexpr double symmetric(std::uint64_t counter, double half_width) const noexcept {
        return half_width * (2.0 * uniform(counter) - 1.0);
    }

    constexpr std::uint64_t key() const noexcept { return key_; }

private:
    std::uint64_t key_;
};

} // namespace nhse
