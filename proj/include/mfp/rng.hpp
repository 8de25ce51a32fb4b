#pragma once

#include <cstdint>
#include <random>

namespace mfp::detail {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014; public domain). Used to
/// derive well-separated per-block seeds from (seed, block index).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit word.
/// Hand-rolled instead of std::uniform_real_distribution so that seeded
/// sequences are identical across standard library implementations.
inline double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1); safe as a log() argument.
inline double to_unit_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// mt19937_64 wrapped with the portable output mappings above.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    double next_unit() { return to_unit(engine_()); }
    double next_unit_open() { return to_unit_open(engine_()); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace mfp::detail
