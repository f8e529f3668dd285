#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sparsetone/rng.hpp"
#include "sparsetone/signal.hpp"

namespace sparsetone {

// Edge-biased partition of [-1,1] (Algorithm-1 geometry). Interval widths
// shrink like sqrt(1-x^2)/m toward the endpoints; weights are |I_j|/2.
struct IntervalPartition {
  std::vector<std::pair<double, double>> intervals;
  std::vector<double> weights;
  int m = 0;

  int size() const { return static_cast<int>(intervals.size()); }
};

// m = ceil(10*max(d,1)/eps); paired intervals [y_{j-1},y_j], [-y_j,-y_{j-1}]
// plus the two edge caps. Tiles [-1,1]; edge caps have width <= 9/m^2.
IntervalPartition generate_intervals(int degree, double eps);

// Polynomial in the affine-mapped variable tau(t) = (2t - t0 - t1)/(t1 - t0),
// i.e. monomials on [-1,1] after mapping the domain [t0,t1] there. A domain of
// [-1,1] makes tau(t) = t.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::vector<cplx> coeffs, double t0, double t1);

  cplx eval(double t) const;  // Horner in tau
  int degree() const { return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  double t0() const { return t0_; }
  double t1() const { return t1_; }
  bool is_zero() const;

 private:
  std::vector<cplx> coeffs_;  // c_0 + c_1 tau + ... + c_d tau^d
  double t0_ = -1.0, t1_ = 1.0;
};

struct WeightedSample {
  double t = 0.0;
  cplx value{0.0, 0.0};
  double weight = 1.0;
};

// argmin_c sum_i w_i |row(t_i) c - b_i|^2. Normal equations with ridge 1e-12
// first; if the weighted residual fails the orthogonality check
// ||A^H W (Ac-b)|| <= 1e-6 ||b||_w it falls back to a Householder QR of
// W^{1/2} A. Throws SingularDesignError when the design stays rank-deficient.
Eigen::VectorXcd weighted_least_squares(const std::function<void(double, cplx*)>& design_row, int ncols,
                                        const std::vector<WeightedSample>& samples);

Eigen::VectorXcd weighted_least_squares(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b,
                                        const Eigen::VectorXd& w);

struct PolyLearnOptions {
  double eps = 1.25;       // partition density used by the learner (m ~ 8d)
  double boost_cr = 4.0;   // R = ceil(boost_cr * log2(1/p))
};

// One pass of edge-biased sampling + weighted regression on [0,T].
// Takes exactly partition-size samples from src.
Polynomial robust_poly_learn(const SignalSource& src, int degree, double T, RngStream& rng,
                             const PolyLearnOptions& opt = {});

// Same, on an arbitrary interval [t0,t1] (used by the equivariance tests).
Polynomial robust_poly_learn_on(const SignalSource& src, int degree, double t0, double t1, RngStream& rng,
                                const PolyLearnOptions& opt = {});

// R-fold rerun + coordinatewise median (re/im) at fresh partition points,
// then one weighted regression onto the medians.
Polynomial robust_poly_learn_boosted(const SignalSource& src, int degree, double T, double fail_prob,
                                     RngStream& rng, const PolyLearnOptions& opt = {});

// (grid max of |P|^2) / (interval mean of |P|^2); 0 for the zero polynomial.
double poly_max_avg_ratio(const Polynomial& p, double a, double b, int grid = 10000);

std::vector<cplx> multipoint_evaluate(const Polynomial& p, const std::vector<double>& points);

// ||P - Q||_rms over [a,b] by quadrature (test helper).
double poly_distance(const Polynomial& p, const Polynomial& q, double a, double b);

}  // namespace sparsetone
