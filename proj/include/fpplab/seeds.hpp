#pragma once

#include <cstdint>
#include <random>

#include "fpplab/weights.hpp"

namespace fpplab {

// Seed of replication `index` under `base`: splitmix64 of (base, index).
// The mixing constants are frozen; changing them breaks reproducibility of
// every recorded run.
inline std::uint64_t seed_stream(std::uint64_t base, std::uint64_t index) {
  return splitmix64(splitmix64(base) ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

// Uniform on the open interval (0, 1) from the top 53 bits.
inline double open_uniform(std::mt19937_64& eng) {
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1p-53;
}

}  // namespace fpplab
