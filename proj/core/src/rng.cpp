#include "slt/rng.hpp"

namespace slt {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t SeedSpec::derived() const noexcept {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ fnv1a64(stream));
  return splitmix64(h ^ trial);
}

SeedSpec SeedSpec::with(std::string_view sub_stream, std::uint64_t trial_index) const {
  return SeedSpec{master_seed, std::string(sub_stream), trial_index};
}

std::uint64_t uniform_index(std::mt19937_64& g, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v;
  do {
    v = g();
  } while (v >= limit);
  return v % n;
}

}  // namespace slt
