#pragma once

#include <cstdint>

namespace sshgl {

// Counter-based random stream (SplitMix64 over a per-stream offset state).
// Stream k of a given seed is fully determined by (seed, k), so trajectory k
// sees the same numbers no matter which worker runs it or in which order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) {
    state_ = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 0x632BE59BD9B4E019ULL));
    // Two warm-up draws decorrelate neighbouring streams.
    next_u64();
    next_u64();
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double strictly inside (0, 1); the half-offset keeps 0 and 1
  // unreachable so a waiting-time threshold always triggers eventually.
  double next_unit_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace sshgl
