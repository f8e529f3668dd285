#include "sparsetone/hashing.hpp"

#include <cmath>
#include <numbers>

#include "sparsetone/errors.hpp"

namespace sparsetone {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check(const HashConfig& cfg, const FilterG* g) {
  if (!(cfg.sigma > 0)) throw ConfigError("HashConfig: sigma > 0 required");
  if (cfg.B < 2 || !is_pow2(cfg.B)) throw ConfigError("HashConfig: B must be a power of two >= 2");
  if (cfg.D < 1) throw ConfigError("HashConfig: D >= 1 required");
  if (g && (g->B != cfg.B || g->D != cfg.D)) throw ConfigError("HashConfig does not match the G filter");
}

// round half to even
long long round_even(double x) {
  const double fl = std::floor(x);
  const double frac = x - fl;
  if (frac > 0.5) return static_cast<long long>(fl) + 1;
  if (frac < 0.5) return static_cast<long long>(fl);
  const long long lo = static_cast<long long>(fl);
  return (lo % 2 == 0) ? lo : lo + 1;
}
}  // namespace

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

SignalSource permute(const SignalSource& src, const HashConfig& cfg) {
  check(cfg, nullptr);
  const double sigma = cfg.sigma, a = cfg.a, b = cfg.b;
  return SignalSource(
      [src, sigma, a, b](double t) {
        const double ph = -kTwoPi * sigma * b * t;
        return src.sample(sigma * (t - a)) * cplx{std::cos(ph), std::sin(ph)};
      },
      src.label() + "|P");
}

int hash_freq(const HashConfig& cfg, double f) {
  check(cfg, nullptr);
  double x = cfg.sigma * (f - cfg.b);
  x -= std::floor(x);  // mod 1 in [0,1)
  const long long r = round_even(x * cfg.B);
  return static_cast<int>(((r % cfg.B) + cfg.B) % cfg.B);
}

void fft_radix2(std::vector<cplx>& v, bool inverse) {
  const int n = static_cast<int>(v.size());
  if (!is_pow2(n)) throw ConfigError("fft_radix2: size must be a power of two");
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(v[i], v[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? kTwoPi : -kTwoPi) / len;
    const cplx wl{std::cos(ang), std::sin(ang)};
    for (int i = 0; i < n; i += len) {
      cplx w{1.0, 0.0};
      for (int j = 0; j < len / 2; ++j) {
        const cplx x = v[i + j];
        const cplx y = v[i + j + len / 2] * w;
        v[i + j] = x + y;
        v[i + j + len / 2] = x - y;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (cplx& z : v) z /= n;
}

std::vector<cplx> hash_to_bins(const SignalSource& windowed, const FilterG& g, const HashConfig& cfg) {
  check(cfg, &g);
  const int B = cfg.B, D = cfg.D;
  const int n = B * D;
  const int c = n / 2;

  std::vector<cplx> u(B, cplx{0.0, 0.0});
  for (int i = 0; i < n; ++i) {
    const double gw = g.eval_time(i - c);
    const double t = cfg.sigma * (i - c + cfg.a);
    const cplx w = windowed.sample(t);
    const double ph = -kTwoPi * cfg.sigma * cfg.b * i;
    u[i % B] += w * cplx{std::cos(ph), std::sin(ph)} * gw;
  }
  fft_radix2(u, /*inverse=*/false);
  // undo the phase introduced by centering the G window at sample c
  for (int m = 0; m < B; ++m) {
    const double ph = kTwoPi * (double(m) / B + cfg.sigma * cfg.b) * c;
    u[m] *= cplx{std::cos(ph), std::sin(ph)};
  }
  return u;
}

}  // namespace sparsetone
