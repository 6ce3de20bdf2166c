#pragma once

#include <cmath>
#include <cstdint>

namespace subord {

// Deterministic splitmix64 stream.  Used instead of <random> engines plus
// distributions so that generated test vectors are identical across
// platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform in [a, b)
  double uniform(double a, double b) { return a + (b - a) * next_double(); }

  // standard normal via Box-Muller (never returns exactly 0 input to log)
  double gaussian() {
    double u1 = 0.0;
    while (u1 == 0.0) u1 = next_double();
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586477 * u2);
  }

  // derive an independent stream deterministically
  Rng fork(std::uint64_t stream_id) const {
    Rng mix(state_ ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1)));
    mix.next_u64();
    return mix;
  }

 private:
  std::uint64_t state_;
};

}  // namespace subord
