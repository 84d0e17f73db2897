#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

#include "ghzlab/common.hpp"

namespace ghzlab::rng {

// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used both as the generator
// step and to derive independent substream seeds from (seed, path) tuples so
// that parallel and serial execution draw identical numbers.
inline std::uint64_t splitmix64_mix(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t id) {
  return splitmix64_mix(seed + 0x9e3779b97f4a7c15ULL * (id + 1));
}

// Small deterministic stream. A Stream is cheap to construct, so kernels make
// one per work item (per sample, per round) keyed by the item index; the
// resulting numbers do not depend on thread scheduling.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  Stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
      : state_(seed) {
    for (std::uint64_t id : path) state_ = derive_seed(state_, id);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix64_mix(state_);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Rejection sampling keeps the result exactly
  // uniform for any n.
  std::uint64_t next_below(std::uint64_t n) {
    internal_check(n > 0, "next_below requires n > 0");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Standard normal pair (Box-Muller). Always consumes two uniforms.
  void next_gaussian_pair(double& z0, double& z1) {
    double u1 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    z0 = radius * std::cos(angle);
    z1 = radius * std::sin(angle);
  }

 private:
  std::uint64_t state_;
};

}  // namespace ghzlab::rng
