#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace treid {

// splitmix64 finalizer (Steele, Lea, Flood 2014). Fixed constants, so streams
// replay identically on every platform and compiler.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// FNV-1a over bytes; used for input digests and id-keyed noise.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Counter-style generator built on the splitmix64 sequence. Integer output is
// bit-exact everywhere; normal/exponential draws additionally go through libm
// (log/sqrt), so they are exact per platform and stable across reruns.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n). Rejection-free multiply-shift; slight modulo
  // bias is irrelevant at the n used here and keeps the draw count fixed.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(next_double() * static_cast<double>(n)) % n;
  }

  // Marsaglia polar method; consumes a variable but seed-determined number of
  // uniforms and caches the spare deviate.
  double normal(double mean, double sigma) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + sigma * spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return mean + sigma * u * f;
  }

  double exponential(double rate) { return -std::log(1.0 - next_double()) / rate; }

  // Independent named substream of the same seed; tag choice is arbitrary but
  // must stay fixed once datasets depend on it.
  SplitMix64 fork(std::uint64_t tag) const {
    return SplitMix64(mix64(state_ ^ (0xD1B54A32D192ED03ULL * (tag + 1))));
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace treid
