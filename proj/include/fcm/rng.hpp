#pragma once

#include <cmath>
#include <cstdint>

#include "fcm/types.hpp"

namespace fcm {

//! splitmix64 step, used both as a stream generator and to derive seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

//! Derives a child seed from (master, a, b). Streams with distinct tags are
//! independent for practical purposes; the mapping is fixed so runs replay.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0) {
  std::uint64_t s = master ^ (0x632be59bd9b4e019ULL * (a + 1));
  splitmix64(s);
  s ^= 0x9e3779b97f4a7c15ULL * (b + 1);
  splitmix64(s);
  return s;
}

//! xoshiro256++ with explicitly coded real-valued draws so that sampled
//! values are identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  //! Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  //! Standard normal pair via Box-Muller (no rejection, fixed draw count).
  void gaussian_pair(double& z0, double& z1) {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    z0 = r * std::cos(2.0 * kPi * u2);
    z1 = r * std::sin(2.0 * kPi * u2);
  }

  template <int D>
  Vec<D> gaussian_vec() {
    Vec<D> q;
    double z0, z1;
    for (int k = 0; k + 1 < D; k += 2) {
      gaussian_pair(z0, z1);
      q[k] = z0;
      q[k + 1] = z1;
    }
    if constexpr (D % 2 == 1) {
      gaussian_pair(z0, z1);
      q[D - 1] = z0;
    }
    return q;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

}  // namespace fcm
