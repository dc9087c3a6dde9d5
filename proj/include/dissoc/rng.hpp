#pragma once

#include <cstdint>

namespace dissoc {

// SplitMix64 (Steele, Lea, Flood). Chosen as the project-wide generator:
// 64-bit state, trivially seedable, and splittable by mixing a stream
// index into the seed, which keeps every sampled object bit-exact across
// platforms. No <random> distributions are used anywhere; raw bits only.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform value in [0, bound) by modulo; the bias is negligible for
    // desk-scale bounds and irrelevant to the determinism contract.
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

  private:
    std::uint64_t state_;
};

// Derived seed for stream `index` of a master seed (trial seeds, per-set
// corpus seeds). The finalizer is SplitMix64's output function.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Default seed for every CLI command; never wall-clock.
inline constexpr std::uint64_t kDefaultSeed = 0xD15A550Cull;

}  // namespace dissoc
