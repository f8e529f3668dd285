#include "sparsetone/filters.hpp"

#include <algorithm>
#include <cmath>

#include "sparsetone/errors.hpp"
#include "sparsetone/quadrature.hpp"

namespace sparsetone {

namespace {
// 5-point Gauss-Legendre on [-1,1]
constexpr double kGlX[5] = {-0.906179845938664, -0.5384693101056831, 0.0, 0.5384693101056831, 0.906179845938664};
constexpr double kGlW[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                            0.2369268850561891};
}  // namespace

double cardinal_bspline(int order, double x) {
  if (order < 1) throw ConfigError("cardinal_bspline: order >= 1 required");
  const double u = x + 0.5 * order;
  if (u <= 0.0 || u >= order) return 0.0;
  if (order == 1) return 1.0;
  int j0 = static_cast<int>(std::floor(u));
  if (j0 >= order) j0 = order - 1;
  // N_{j,1} on integer knots, then de Boor up to order
  std::vector<double> n(order, 0.0);
  n[j0] = 1.0;
  for (int p = 2; p <= order; ++p) {
    for (int j = 0; j <= order - p; ++j) {
      const double a = (u - j) * n[j];
      const double b = (j + p - u) * n[j + 1];
      n[j] = (a + b) / (p - 1);
    }
  }
  return n[0];
}

double SincPowerTable::integrand(double x) const { return powi(sinc(s1_ * x), ell_); }

SincPowerTable::SincPowerTable(double s1, int ell, double xmax, int panels_per_half_period)
    : s1_(s1), ell_(ell) {
  if (s1 <= 0 || ell < 1) throw ConfigError("SincPowerTable: bad parameters");
  step_ = 1.0 / (s1_ * panels_per_half_period);
  const int n = static_cast<int>(std::ceil(xmax / step_));
  cum_.resize(n + 1);
  cum_[0] = 0.0;
  for (int i = 0; i < n; ++i) cum_[i + 1] = cum_[i] + partial(i * step_, (i + 1) * step_);
}

double SincPowerTable::partial(double a, double b) const {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += kGlW[i] * integrand(c + h * kGlX[i]);
  return s * h;
}

double SincPowerTable::cumulative(double x) const {
  const double sign = x < 0 ? -1.0 : 1.0;
  const double ax = std::abs(x);
  const int n = static_cast<int>(cum_.size()) - 1;
  const double xmax = n * step_;
  if (ax >= xmax) return sign * cum_[n];  // tail past xmax is negligible by construction
  const int i = static_cast<int>(ax / step_);
  return sign * (cum_[i] + partial(i * step_, ax));
}

FilterH FilterH::build(int k, double delta, double T, const HKnobs& knobs) {
  if (k < 1 || !(delta > 0 && delta < 1) || T <= 0) throw ConfigError("build_filter_h: bad parameters");
  FilterH h;
  h.T = T;
  h.delta = delta;
  if (knobs.ell_override > 0)
    h.ell = knobs.ell_override + (knobs.ell_override % 2);
  else
    h.ell = 2 * static_cast<int>(std::ceil((k * std::log(k / delta) + 4.0) / 2.0));
  h.s1 = knobs.s1_override > 0 ? knobs.s1_override
                               : std::ceil(std::max(knobs.s1_min, knobs.c1 * double(k) * double(k)));
  h.s2 = 1.0 - 2.0 / h.s1;
  h.s3 = knobs.s3_override > 0 ? knobs.s3_override : 1.0 - 1.0 / h.s1;
  if (h.s2 / 2.0 + 1.0 / h.s1 > 0.5 + 1e-12) throw ConfigError("build_filter_h: s2/2 + 1/s1 > 1/2");
  h.delta_h = h.s1 * h.ell / (h.s3 * T);

  h.table_ = SincPowerTable(h.s1, h.ell, /*xmax=*/8.0);
  const double mass = h.table_.integral(-h.s2 / 2.0, h.s2 / 2.0);
  if (!(mass > 0)) throw NumericalError("build_filter_h: window mass vanished");
  h.s0 = 1.0 / mass;

  // cubic-Hermite cache of H1 on [0, u_tab]; beyond it the exact path runs.
  h.u_tab_ = 1.05;
  h.du_ = 1.0 / (h.s1 * knobs.table_density);
  const int n = static_cast<int>(std::ceil(h.u_tab_ / h.du_)) + 1;
  h.hval_.resize(n);
  h.hder_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double u = i * h.du_;
    h.hval_[i] = h.s0 * h.table_.integral(u - h.s2 / 2.0, u + h.s2 / 2.0);
    h.hder_[i] = h.s0 * (h.table_.integrand(u + h.s2 / 2.0) - h.table_.integrand(u - h.s2 / 2.0));
  }
  return h;
}

double FilterH::eval_h1(double u) const {
  return s0 * table_.integral(u - s2 / 2.0, u + s2 / 2.0);
}

double FilterH::eval_exact(double t) const {
  const double u = (t - T / 2.0) / (s3 * T);
  return eval_h1(u);
}

double FilterH::eval(double t) const {
  const double u = std::abs((t - T / 2.0) / (s3 * T));
  const double x = u / du_;
  const int i = static_cast<int>(x);
  if (i + 1 >= static_cast<int>(hval_.size())) return eval_h1(u);
  const double s = x - i;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * hval_[i] + h01 * hval_[i + 1] + du_ * (h10 * hder_[i] + h11 * hder_[i + 1]);
}

double FilterH::hat_magnitude(double f) const {
  const double nu = s3 * T * f;
  if (std::abs(nu) >= s1 * ell / 2.0) return 0.0;
  const double v = (s0 * s2 / s1) * cardinal_bspline(ell, nu / s1) * sinc(nu * s2);
  return s3 * T * std::abs(v);
}

SignalSource windowed(const SignalSource& src, const FilterH& h) {
  return SignalSource([src, h](double t) { return src.sample(t) * h.eval(t); }, src.label() + "*H");
}

FilterG FilterG::build(int B, double delta, double alpha, const GKnobs& knobs) {
  if (B < 2 || !(delta > 0 && delta < 1) || !(alpha > 0 && alpha < 1))
    throw ConfigError("build_filter_g: bad parameters");
  FilterG g;
  g.B = B;
  g.alpha = alpha;
  g.delta = delta;
  g.l = knobs.l_override > 0 ? knobs.l_override
                             : std::max(2, static_cast<int>(std::ceil(knobs.c2 * std::log(B / delta))));
  g.s1g = 4.0 * B / alpha;
  g.s2g = 1.0 / B - 2.0 / g.s1g;  // = (2 - alpha)/(2B)
  g.D = static_cast<int>(std::ceil(g.l * g.s1g / B));

  g.table_ = SincPowerTable(g.s1g, g.l, /*xmax=*/4.0);
  const double ic = g.table_.integral(-g.s2g / 2.0, g.s2g / 2.0);
  if (!(ic > 0)) throw NumericalError("build_filter_g: window mass vanished");
  g.inv_ic_ = 1.0 / ic;
  g.b0 = g.s2g / (g.s1g * ic);
  return g;
}

double FilterG::eval_time(double t) const {
  const double m = cardinal_bspline(l, t / s1g);
  if (m == 0.0) return 0.0;
  return b0 * m * sinc(t * s2g);
}

double FilterG::eval_hat(double xi) const {
  return inv_ic_ * table_.integral(xi - s2g / 2.0, xi + s2g / 2.0);
}

double FilterG::eval_hat_periodic(double sigma, double b, int j, double f) const {
  if (!(sigma > 0)) throw ConfigError("eval_hat_periodic: sigma > 0 required");
  const double x = double(j) / B - sigma * f - sigma * b;
  const double r = x - std::round(x);
  double s = 0.0;
  for (int i = -2; i <= 2; ++i) {
    const double arg = r + i;
    if (std::abs(arg) <= 2.0) s += eval_hat(arg);
  }
  return s;
}

}  // namespace sparsetone
