#ifndef SENSEBEAM_RNG_HPP
#define SENSEBEAM_RNG_HPP

#include <cstdint>

namespace sensebeam {

/// Seed stride between consecutive episodes (golden-ratio constant).
inline constexpr std::uint64_t kEpisodeSeedStride = 0x9E3779B9ULL;

/// SplitMix64 finalizer. Used to hash (seed, index) pairs into independent
/// stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL));
}

constexpr std::uint64_t episode_seed(std::uint64_t base, std::uint64_t episode) {
  return base + episode * kEpisodeSeedStride;
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace sensebeam

#endif  // SENSEBEAM_RNG_HPP
