#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace slt {

/// Identifies one independent random stream: the generator for
/// (master_seed, stream, trial) is a pure function of those three values, so
/// trials never share generator state and any execution order reproduces
/// the same draws.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::string stream = "default";
  std::uint64_t trial = 0;

  /// Seed word derived by hashing the three fields.
  std::uint64_t derived() const noexcept;
  std::mt19937_64 engine() const { return std::mt19937_64(derived()); }

  SeedSpec with(std::string_view sub_stream, std::uint64_t trial_index) const;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t fnv1a64(std::string_view s) noexcept;

/// Uniform double in [0, 1) from the top 53 bits of one engine word.
/// Used instead of std::uniform_real_distribution, whose output is
/// implementation-defined.
inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform index in [0, n) by rejection; n >= 1.
std::uint64_t uniform_index(std::mt19937_64& g, std::uint64_t n);

}  // namespace slt
