#pragma once

#include <vector>

#include "sparsetone/signal.hpp"

namespace sparsetone {

// Centered cardinal B-spline of order l (unit knots, support [-l/2, l/2]),
// evaluated with the positive de Boor recurrence.
double cardinal_bspline(int order, double x);

// Cumulative integral S(x) = int_0^x sinc(s1 u)^ell du on panels aligned to
// the sinc zeros (Gauss-Legendre inside each panel). S(-x) = -S(x).
class SincPowerTable {
 public:
  SincPowerTable() = default;
  SincPowerTable(double s1, int ell, double xmax, int panels_per_half_period = 32);

  double integrand(double x) const;
  double cumulative(double x) const;
  double integral(double a, double b) const { return cumulative(b) - cumulative(a); }

 private:
  double partial(double a, double b) const;  // single GL pass, b-a < step
  double s1_ = 1.0;
  int ell_ = 2;
  double step_ = 1.0;
  std::vector<double> cum_;
};

struct HKnobs {
  double c1 = 4.0;        // s1 = max(s1_min, c1*k^2)
  double s1_min = 32.0;
  int ell_override = 0;   // 0 = derive from (k, delta)
  double s1_override = 0.0;
  double s3_override = 0.0;
  int table_density = 1024;  // Hermite-table points per 1/s1
};

// Time-domain window ~ indicator of [0,T]; Fourier support width Delta_h.
// H(t) = H1(u), u = (t - T/2)/(s3*T), H1 = s0 * sinc(s1 .)^ell (*) rect_{s2}.
class FilterH {
 public:
  static FilterH build(int k, double delta, double T, const HKnobs& knobs = {});

  double eval(double t) const;        // cached cubic-Hermite path
  double eval_exact(double t) const;  // direct panel quadrature
  double eval_h1(double u) const;     // normalized axis
  // |H^(f)| closed form: s3*T * (s0*s2/s1) * M_ell(nu/s1) * sinc(nu*s2),
  // nu = s3*T*f. Exactly zero outside [-Delta_h/2, Delta_h/2].
  double hat_magnitude(double f) const;

  double s0 = 1.0, s1 = 32.0, s2 = 0.0, s3 = 1.0;
  int ell = 8;
  double T = 1.0;
  double delta = 0.05;
  double delta_h = 0.0;  // Hz

 private:
  SincPowerTable table_;
  std::vector<double> hval_, hder_;  // Hermite data on u in [0, u_tab]
  double du_ = 0.0;
  double u_tab_ = 0.0;
};

// x -> x(t) * H(t); one source sample per call.
SignalSource windowed(const SignalSource& src, const FilterH& h);

struct GKnobs {
  double c2 = 2.0;  // l = ceil(c2 * ln(B/delta))
  int l_override = 0;
};

// Compact-time kernel whose transform approximates a 1/B-wide bin indicator
// in the hash coordinate xi = j/B - sigma*f - sigma*b (period 1).
// G(t) = b0 * M_l(t/s1g) * sinc(t*s2g), t in sample units;
// G^(xi) = (1/Ic) * int_{xi-s2g/2}^{xi+s2g/2} sinc(s1g u)^l du, G^(0) = 1.
class FilterG {
 public:
  static FilterG build(int B, double delta, double alpha, const GKnobs& knobs = {});

  double eval_time(double t) const;  // exactly zero outside the spline support
  double eval_hat(double xi) const;
  // G^dis(j/B - sigma*f - sigma*b) = sum_i G^(i + j/B - sigma*f - sigma*b),
  // truncated to |argument| <= 2.
  double eval_hat_periodic(double sigma, double b, int j, double f) const;

  double support_half() const { return 0.5 * l * s1g; }  // samples
  int samples_per_bin() const { return D; }

  int B = 2;
  double alpha = 0.5;
  int l = 2;
  double s1g = 0.0, s2g = 0.0;
  double b0 = 0.0;  // combined time normalization s2g/(s1g*Ic)
  int D = 1;        // ceil(l*s1g/B); B*D = window length in samples
  double delta = 0.05;

 private:
  SincPowerTable table_;
  double inv_ic_ = 1.0;
};

}  // namespace sparsetone
