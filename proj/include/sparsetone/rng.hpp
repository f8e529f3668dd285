#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <numbers>

namespace sparsetone {

// splitmix64 step (Vigna, public domain).
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  return splitmix64(s);
}

// Counter-splittable RNG stream. fork(i) derives an independent stream, so
// parallel and serial traversals of the same fork tree see identical draws.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(splitmix64(seed)) {
    if (state_ == 0) state_ = 0x9e3779b97f4a7c15ULL;
  }

  RngStream fork(std::uint64_t id) const { return RngStream(mix64(state_, id * 0x9e3779b97f4a7c15ULL + 1)); }

  std::uint64_t next_u64() { return splitmix64(state_); }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t uniform_index(std::uint64_t n) { return n ? next_u64() % n : 0; }

  // standard normal via Box-Muller
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  explicit RngStream(std::uint64_t raw, int) : state_(raw) {}
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Deterministic white noise: a pure function of (seed, t). Two unit-variance
// gaussians per call, derived by hashing the bit pattern of t.
inline void gaussian_pair_at(std::uint64_t seed, double t, double& g0, double& g1) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(t));
  std::memcpy(&bits, &t, sizeof(bits));
  std::uint64_t s = mix64(seed, bits);
  const std::uint64_t ua = splitmix64(s);
  const std::uint64_t ub = splitmix64(s);
  double u1 = static_cast<double>(ua >> 11) * 0x1.0p-53;
  double u2 = static_cast<double>(ub >> 11) * 0x1.0p-53;
  if (u1 < 1e-300) u1 = 1e-300;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  g0 = r * std::cos(a);
  g1 = r * std::sin(a);
}

}  // namespace sparsetone
