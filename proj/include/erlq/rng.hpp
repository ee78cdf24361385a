#pragma once

#include <cstdint>
#include <random>

namespace erlq {

using Rng = std::mt19937_64;

// Independent stream for one simulated path. The same (seed, index) pair
// always yields the same stream, whichever worker consumes it.
inline Rng path_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x51ed2701u};
  return Rng(seq);
}

// Uniform variate on the open interval (0, 1).
inline double uniform_open(Rng& rng) {
  for (;;) {
    double u = std::generate_canonical<double, 53>(rng);
    if (u > 0.0) return u;
  }
}

}  // namespace erlq
