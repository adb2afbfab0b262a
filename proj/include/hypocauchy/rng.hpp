#pragma once

#include <cstdint>
#include <random>

namespace hypocauchy {

/// Reproducible sampling: stream `chunk` of a run seeded with `seed` is an mt19937_64
/// initialised from seed_seq{seed, chunk}. Work split into fixed-size chunks gives the same
/// samples regardless of thread count.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

inline constexpr std::size_t kSampleChunk = 4096;

}  // namespace hypocauchy
