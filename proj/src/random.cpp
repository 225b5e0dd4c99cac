#include "lcft/mc.hpp"

namespace lcft {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng sample_stream(std::uint64_t seed, std::uint64_t index, std::uint64_t lane) {
    const std::uint64_t k = splitmix64(splitmix64(splitmix64(seed) ^ index) + lane);
    std::seed_seq seq{static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(lane)};
    return Rng(seq);
}

}  // namespace lcft
