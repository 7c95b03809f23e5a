#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace saddlebounds {

/// SplitMix64 finalizer; used to derive independent engine seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the (combination, run) stream of a suite: the base seed and both
/// stream ids are folded through SplitMix64 so streams never overlap.
inline std::uint64_t stream_seed(std::uint64_t base, std::uint64_t combination, std::uint64_t run) {
  return splitmix64(splitmix64(splitmix64(base) ^ (combination + 1)) ^ (run + 1));
}

/// mt19937_64 wrapped with fully pinned uniform/normal draws (Box-Muller on
/// 53-bit uniforms), so byte-identical reruns do not depend on the standard
/// library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace saddlebounds
