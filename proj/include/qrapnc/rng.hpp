#pragma once

#include <cstdint>
#include <random>

namespace qrapnc {

// std::uniform_real_distribution is not bit-portable across standard
// libraries, so instance generation maps engine output to doubles by hand.
// mt19937_64 itself has a standardized output stream.
inline double uniform_unit(std::mt19937_64& eng) {
  // 53 high bits -> [0, 1)
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(eng);
}

// Mixing function for deriving per-cell seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace qrapnc
