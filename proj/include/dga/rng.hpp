#pragma once

#include <cstdint>
#include <string_view>

namespace dga {

/// SplitMix64, specified bit-exactly so generated data is identical on every
/// platform and can be reproduced in any language:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// uniform_below(n) is next() % n. The modulo bias is below 2^-40 for every
/// n used here.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t uniform_below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    /// In [0,1) with 53 random bits.
    constexpr double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    constexpr std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

/// 64-bit FNV-1a, used to turn stream names into seeds.
constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Seed of the named sub-stream `name`/`index` of `seed`. Independent of
/// call order, so parallel work items can derive their streams freely.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view name, std::uint64_t index = 0) {
    SplitMix64 mix(seed ^ fnv1a64(name));
    const std::uint64_t a = mix.next();
    SplitMix64 second(a ^ (index * 0xD1B54A32D192ED03ULL));
    return second.next();
}

}  // namespace dga
