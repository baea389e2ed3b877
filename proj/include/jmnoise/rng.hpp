#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace jmnoise {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ with splitmix64 seeding. Self-contained so that streams are
// bit-identical across standard libraries and platforms; std distributions
// are deliberately not used.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  // Stream for chunk `chunk_index` of a logical run; chunk streams are a
  // pure function of (seed, chunk_index), so results do not depend on how
  // chunks are scheduled over threads.
  static Xoshiro256 for_chunk(std::uint64_t seed, std::uint64_t chunk_index) {
    std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ULL * (chunk_index + 1));
    Xoshiro256 rng(0);
    for (auto& word : rng.state_) word = splitmix64(sm);
    return rng;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe under log().
  double next_double_positive() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard complex Gaussian with E|g|^2 = 1: modulus^2 ~ Exp(1), phase
  // uniform. Consumes exactly two uniforms.
  std::complex<double> next_complex_gaussian() {
    const double radius_sq = -std::log(next_double_positive());
    const double phase = 6.283185307179586477 * next_double();
    const double r = std::sqrt(radius_sq);
    return {r * std::cos(phase), r * std::sin(phase)};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

}  // namespace jmnoise
