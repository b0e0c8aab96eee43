#pragma once

#include <cmath>
#include <cstdint>

namespace orlz {

// SplitMix64 keyed by (seed, stream). Streams are cheap to construct, so
// every Monte Carlo replicate gets its own: replicate r always sees the same
// variates no matter how replicates are partitioned across threads. The
// generator is fully specified here, so sequences are identical on every
// platform.
class SubstreamRng {
 public:
  SubstreamRng(std::uint64_t seed, std::uint64_t stream)
      : state_(mix(mix(seed + kGamma * (stream + 1)) + kGamma)) {}

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a Box-Muller log argument.
  double uniform_pos() { return 1.0 - uniform(); }

  double rademacher() { return (next_u64() & 1u) ? 1.0 : -1.0; }

  // Standard normal via Box-Muller (deterministic, no rejection loop).
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace orlz
