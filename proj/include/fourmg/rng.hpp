#pragma once

#include "fourmg/sparse.hpp"

#include <cstdint>
#include <random>

namespace fourmg {

/// Uniform double in [0,1) from the top 53 bits; identical on every
/// platform, unlike std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline Vec random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Vec x(n);
  for (auto& v : x) v = uniform01(gen);
  return x;
}

} // namespace fourmg
