#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace dispatchsim {

// All randomness flows through RngStream so that every run is reproducible
// from a single master seed regardless of thread count or platform.
// Generator: xoshiro256++ state-seeded by splitmix64. Substreams are derived
// by re-mixing (master, key) through splitmix64, never by jumping, so any
// (replication, candidate, sample) index maps to an independent stream.
inline constexpr const char* rng_algorithm = "xoshiro256++";

inline std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Stream seed for (master, key); keys 0,1,2,... give unrelated streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t key) {
  std::uint64_t x = master;
  std::uint64_t h = splitmix64(x);
  x = h ^ (key * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
  return splitmix64(x);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x);
  }
  RngStream(std::uint64_t master, std::uint64_t key)
      : RngStream(derive_seed(master, key)) {}

  std::uint64_t next_u64() {
    const std::uint64_t out = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return out;
  }

  // Uniform on [0,1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Inverse-CDF exponential; rate <= 0 yields +infinity (no event).
  double exponential(double rate) {
    if (rate <= 0.0) return std::numeric_limits<double>::infinity();
    return -std::log1p(-uniform()) / rate;
  }

  // Box-Muller, cosine branch only: two uniforms per variate, no cached state.
  double normal(double mean, double stddev) {
    const double u1 = 1.0 - uniform();  // (0,1], keeps the log finite
    const double u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * 3.14159265358979323846 * u2);
    return mean + stddev * z;
  }

  // Uniform index in [0,n); bias is O(n/2^64), far below anything observable.
  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }
  std::uint64_t s_[4];
};

}
