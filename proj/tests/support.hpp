#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <doctest.h>

#include "slt/hypothesis.hpp"
#include "slt/sample.hpp"

namespace slt::test {

inline LabeledSample sample_1d(std::vector<std::pair<double, int>> rows) {
  LabeledSample S;
  for (auto [x, y] : rows) S.push_back({Instance{x}, label_from_int(y)});
  return S;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline LabeledSample random_sample_1d(std::mt19937_64& g, std::size_t m) {
  LabeledSample S;
  for (std::size_t i = 0; i < m; ++i) {
    S.push_back({Instance{uniform(g)}, label_from_int(static_cast<int>(g() & 1U))});
  }
  return S;
}

// Evaluates an upward or downward threshold from its definition, bypassing the library.
inline int threshold_oracle(double theta, bool up, double x) { return up ? (x >= theta) : (x <= theta); }

}  // namespace slt::test
