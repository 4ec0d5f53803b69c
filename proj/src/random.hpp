#pragma once

#include <cstdint>
#include <random>

namespace mixreg::detail {

// 53 random mantissa bits -> [0, 1). std::uniform_real_distribution output is
// implementation-defined, which would break cross-platform reproducibility.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint8_t random_bit(std::mt19937_64& rng) {
  return static_cast<std::uint8_t>(rng() >> 63);
}

}  // namespace mixreg::detail
