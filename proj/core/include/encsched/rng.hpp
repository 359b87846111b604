#pragma once

#include <cmath>
#include <cstdint>

namespace encsched {

// SplitMix64 (Steele, Lea, Flood 2014). The generator, the stream
// derivation and the variate recipes below are part of the output
// contract: simulation reports are reproducible bit-for-bit from
// (seed, trial index) alone.
//
//   state_{i+1} = state_i + 0x9E3779B97F4A7C15
//   output      = mix(state_{i+1})
//
// Uniform doubles take the top 53 bits, Bernoulli compares a uniform
// against p, Gaussians use the Box-Muller transform on two uniforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  // Independent substream for one Monte Carlo trial: the stream seed is
  // mix(mix(seed) ^ mix(stream + 1)), so streams never share a starting
  // point for any (seed, stream) pair encountered in practice.
  static SplitMix64 for_stream(std::uint64_t seed, std::uint64_t stream) {
    return SplitMix64(mix(mix(seed) ^ mix(stream + 1)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  // Standard normal. Draws pairs via Box-Muller and caches the spare.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace encsched
