#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace spca::rng {

using Engine = std::mt19937_64;

/// SplitMix64 finaliser.
[[nodiscard]] constexpr std::uint64_t mix(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives a stream seed from a master seed and a sequence of keys
/// (e.g. sample size, trial index, purpose tag). Independent of call order.
[[nodiscard]] constexpr std::uint64_t derive(std::uint64_t master, std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = mix(master);
    for (auto key : keys) {
        h = mix(h ^ mix(key + 0x632be59bd9b4e019ULL));
    }
    return h;
}

[[nodiscard]] inline Engine make_engine(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return Engine(seq);
}

}  // namespace spca::rng
