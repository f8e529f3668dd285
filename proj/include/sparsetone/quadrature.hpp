#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "sparsetone/errors.hpp"

namespace sparsetone {

// Composite-Simpson settings. Deterministic uniform grid, tolerance is
// reported by callers rather than adapted.
struct QuadratureSpec {
  int points = 1 << 14;  // grid intervals per [0,T] (rounded up to even)
  double tol = 1e-6;
};

// Composite Simpson of a scalar function on [a,b] with n intervals.
template <typename F>
auto integrate_simpson(F&& f, double a, double b, int n) {
  if (n < 2) n = 2;
  if (n % 2) ++n;
  const double h = (b - a) / n;
  using R = decltype(f(a));
  R sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) {
    const double t = a + h * i;
    sum += f(t) * ((i % 2) ? 4.0 : 2.0);
  }
  return sum * (h / 3.0);
}

// sqrt((1/(b-a)) * int_a^b |y(t)|^2 dt) for a complex-valued y.
template <typename F>
double rms_on_interval(F&& y, double a, double b, const QuadratureSpec& quad = {}) {
  const double v = integrate_simpson(
      [&](double t) {
        const std::complex<double> z = y(t);
        const double m = std::norm(z);
        if (!std::isfinite(m)) throw NumericalError("non-finite sample in quadrature");
        return m;
      },
      a, b, quad.points);
  return std::sqrt(std::max(0.0, v / (b - a)));
}

inline double sinc(double x) {
  if (std::abs(x) < 1e-8) {
    const double p = std::numbers::pi * x;
    return 1.0 - p * p / 6.0;
  }
  const double p = std::numbers::pi * x;
  return std::sin(p) / p;
}

// x^n for even-ish small integer n by squaring.
inline double powi(double x, int n) {
  double r = 1.0, b = x;
  for (int e = n; e > 0; e >>= 1) {
    if (e & 1) r *= b;
    b *= b;
  }
  return r;
}

}  // namespace sparsetone
