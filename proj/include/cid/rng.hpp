#pragma once

#include <cmath>
#include <cstdint>

namespace cid {

// Single-word splitmix64 generator. Chosen over <random> engines so that
// streams are bit-identical across platforms and standard libraries, which
// the reproducibility contract of the generators and the simulator requires.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53 bits of mantissa.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller; explicit formula instead of std::normal_distribution so the
  // draw sequence does not depend on the standard library.
  double normal(double mean, double stddev) {
    double u1;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(6.28318530717958647692 * u2);
  }

  double normal_truncated(double mean, double stddev, double min_value) {
    double x;
    do {
      x = normal(mean, stddev);
    } while (x < min_value);
    return x;
  }

  // Inverse-CDF triangular draw on [lo, hi] with the given mode.
  double triangular(double lo, double hi, double mode) {
    if (hi <= lo) return lo;
    const double u = uniform01();
    const double span = hi - lo;
    const double fc = (mode - lo) / span;
    if (u < fc) return lo + std::sqrt(u * span * (mode - lo));
    return hi - std::sqrt((1.0 - u) * span * (hi - mode));
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix_seed(std::uint64_t h, std::uint64_t tag) {
  h ^= tag + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  std::uint64_t z = h;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic seed for a sub-stream, independent of evaluation order. Used
// to give every (run, scenario, line, segment) its own stream so parallel and
// serial execution produce identical draws.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0, std::uint64_t d = 0) {
  std::uint64_t h = master;
  h = mix_seed(h, a);
  h = mix_seed(h, b);
  h = mix_seed(h, c);
  h = mix_seed(h, d);
  return h;
}

}  // namespace cid
