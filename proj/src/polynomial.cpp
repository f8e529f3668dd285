#include "sparsetone/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "sparsetone/errors.hpp"
#include "sparsetone/quadrature.hpp"

namespace sparsetone {

IntervalPartition generate_intervals(int degree, double eps) {
  if (degree < 0) throw ConfigError("generate_intervals: degree >= 0 required");
  if (!(eps > 0.0 && eps <= 2.0)) throw ConfigError("generate_intervals: eps in (0,2] required");
  const int m = static_cast<int>(std::ceil(10.0 * std::max(degree, 1) / eps));
  const double guard = 1.0 - 9.0 / (double(m) * m);

  std::vector<double> ys{0.0};
  while (ys.back() <= guard) {
    const double y = ys.back();
    ys.push_back(y + std::sqrt(std::max(0.0, 1.0 - y * y)) / m);
  }
  // ys.back() is the first value past the guard; it becomes y_l.
  const double yl = std::min(ys.back(), 1.0);

  IntervalPartition part;
  part.m = m;
  const int l = static_cast<int>(ys.size()) - 1;
  for (int j = 1; j <= l; ++j) {
    const double lo = ys[j - 1];
    const double hi = (j == l) ? yl : ys[j];
    part.intervals.emplace_back(lo, hi);
    part.intervals.emplace_back(-hi, -lo);
  }
  part.intervals.emplace_back(yl, 1.0);
  part.intervals.emplace_back(-1.0, -yl);

  std::sort(part.intervals.begin(), part.intervals.end());
  part.weights.reserve(part.intervals.size());
  for (auto& [lo, hi] : part.intervals) part.weights.push_back((hi - lo) / 2.0);
  return part;
}

Polynomial::Polynomial(std::vector<cplx> coeffs, double t0, double t1) : coeffs_(std::move(coeffs)), t0_(t0), t1_(t1) {
  while (coeffs_.size() > 1 && coeffs_.back() == cplx{0.0, 0.0}) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back({0.0, 0.0});
}

cplx Polynomial::eval(double t) const {
  const double tau = (2.0 * t - t0_ - t1_) / (t1_ - t0_);
  cplx acc{0.0, 0.0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * tau + *it;
  return acc;
}

bool Polynomial::is_zero() const {
  for (const cplx& c : coeffs_)
    if (c != cplx{0.0, 0.0}) return false;
  return true;
}

Eigen::VectorXcd weighted_least_squares(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b,
                                        const Eigen::VectorXd& w) {
  const Eigen::Index n = A.rows(), p = A.cols();
  if (n < p) throw SingularDesignError("weighted_least_squares: fewer samples than basis columns");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(w(i) > 0.0)) throw ConfigError("weighted_least_squares: weights must be positive");

  const Eigen::MatrixXcd Aw = w.array().sqrt().matrix().asDiagonal() * A;
  const Eigen::VectorXcd bw = w.array().sqrt().matrix().asDiagonal() * b;

  // normal equations with a tiny ridge
  Eigen::MatrixXcd G = Aw.adjoint() * Aw;
  const double ridge = 1e-12 * std::max(1.0, G.diagonal().real().maxCoeff());
  G.diagonal().array() += ridge;
  Eigen::VectorXcd c = G.ldlt().solve(Aw.adjoint() * bw);

  const double bnorm = bw.norm();
  const double ortho = (Aw.adjoint() * (Aw * c - bw)).norm();
  if (!(ortho <= 1e-6 * std::max(bnorm, 1e-300)) || !c.allFinite()) {
    // ill-conditioned design: factorization-based solve
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Aw);
    c = qr.solve(bw);
    const auto& R = qr.matrixQR();
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < p; ++j) {
      const double d = std::abs(R(j, j));
      dmax = std::max(dmax, d);
      dmin = std::min(dmin, d);
    }
    if (!c.allFinite() || dmin <= dmax * 1e-300) throw SingularDesignError("design rank-deficient beyond ridge");
  }
  return c;
}

Eigen::VectorXcd weighted_least_squares(const std::function<void(double, cplx*)>& design_row, int ncols,
                                        const std::vector<WeightedSample>& samples) {
  const int n = static_cast<int>(samples.size());
  Eigen::MatrixXcd A(n, ncols);
  Eigen::VectorXcd b(n);
  Eigen::VectorXd w(n);
  std::vector<cplx> row(ncols);
  for (int i = 0; i < n; ++i) {
    design_row(samples[i].t, row.data());
    for (int j = 0; j < ncols; ++j) A(i, j) = row[j];
    b(i) = samples[i].value;
    w(i) = samples[i].weight;
  }
  return weighted_least_squares(A, b, w);
}

namespace {

void monomial_row(double tau, cplx* row, int ncols) {
  cplx p{1.0, 0.0};
  for (int j = 0; j < ncols; ++j) {
    row[j] = p;
    p *= tau;
  }
}

Polynomial learn_impl(const SignalSource& src, int degree, double t0, double t1, RngStream& rng,
                      const PolyLearnOptions& opt) {
  if (degree < 0) throw ConfigError("robust_poly_learn: degree >= 0 required");
  if (!(t1 > t0)) throw ConfigError("robust_poly_learn: empty interval");
  const IntervalPartition part = generate_intervals(degree, opt.eps);
  const int n = part.size();
  const int p = degree + 1;

  Eigen::MatrixXcd A(n, p);
  Eigen::VectorXcd b(n);
  Eigen::VectorXd w(n);
  std::vector<cplx> row(p);
  for (int i = 0; i < n; ++i) {
    const auto& [lo, hi] = part.intervals[i];
    const double tau = rng.uniform(lo, hi);
    const double t = t0 + (t1 - t0) * (tau + 1.0) / 2.0;
    monomial_row(tau, row.data(), p);
    for (int j = 0; j < p; ++j) A(i, j) = row[j];
    b(i) = src.sample(t);
    w(i) = part.weights[i];
  }
  Eigen::VectorXcd c = weighted_least_squares(A, b, w);
  return Polynomial(std::vector<cplx>(c.data(), c.data() + p), t0, t1);
}

}  // namespace

Polynomial robust_poly_learn(const SignalSource& src, int degree, double T, RngStream& rng,
                             const PolyLearnOptions& opt) {
  return learn_impl(src, degree, 0.0, T, rng, opt);
}

Polynomial robust_poly_learn_on(const SignalSource& src, int degree, double t0, double t1, RngStream& rng,
                                const PolyLearnOptions& opt) {
  return learn_impl(src, degree, t0, t1, rng, opt);
}

Polynomial robust_poly_learn_boosted(const SignalSource& src, int degree, double T, double fail_prob,
                                     RngStream& rng, const PolyLearnOptions& opt) {
  if (!(fail_prob > 0.0 && fail_prob < 1.0)) throw ConfigError("robust_poly_learn_boosted: p in (0,1) required");
  const int R = std::max(1, static_cast<int>(std::ceil(opt.boost_cr * std::log2(1.0 / fail_prob))));

  std::vector<Polynomial> runs;
  runs.reserve(R);
  for (int r = 0; r < R; ++r) {
    RngStream s = rng.fork(r + 1);
    runs.push_back(learn_impl(src, degree, 0.0, T, s, opt));
  }
  if (R == 1) return runs[0];

  // fresh partition points; polynomial evaluations only, no new source samples
  const IntervalPartition part = generate_intervals(degree, opt.eps);
  const int n = part.size();
  const int p = degree + 1;
  RngStream s = rng.fork(0);

  Eigen::MatrixXcd A(n, p);
  Eigen::VectorXcd b(n);
  Eigen::VectorXd w(n);
  std::vector<cplx> row(p);
  std::vector<double> re(R), im(R);
  for (int i = 0; i < n; ++i) {
    const auto& [lo, hi] = part.intervals[i];
    const double tau = s.uniform(lo, hi);
    const double t = (tau + 1.0) / 2.0 * T;
    for (int r = 0; r < R; ++r) {
      const cplx v = runs[r].eval(t);
      re[r] = v.real();
      im[r] = v.imag();
    }
    auto median = [](std::vector<double>& v) {
      const size_t mid = v.size() / 2;
      std::nth_element(v.begin(), v.begin() + mid, v.end());
      double hiv = v[mid];
      if (v.size() % 2 == 0) {
        const double lov = *std::max_element(v.begin(), v.begin() + mid);
        return (lov + hiv) / 2.0;
      }
      return hiv;
    };
    monomial_row(tau, row.data(), p);
    for (int j = 0; j < p; ++j) A(i, j) = row[j];
    b(i) = cplx{median(re), median(im)};
    w(i) = part.weights[i];
  }
  Eigen::VectorXcd c = weighted_least_squares(A, b, w);
  return Polynomial(std::vector<cplx>(c.data(), c.data() + p), 0.0, T);
}

double poly_max_avg_ratio(const Polynomial& p, double a, double b, int grid) {
  if (p.is_zero()) return 0.0;
  double mx = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double t = a + (b - a) * double(i) / grid;
    mx = std::max(mx, std::norm(p.eval(t)));
  }
  const double mean = integrate_simpson([&](double t) { return std::norm(p.eval(t)); }, a, b, 1 << 14) / (b - a);
  return mean > 0 ? mx / mean : 0.0;
}

std::vector<cplx> multipoint_evaluate(const Polynomial& p, const std::vector<double>& points) {
  std::vector<cplx> out;
  out.reserve(points.size());
  for (double t : points) out.push_back(p.eval(t));
  return out;
}

double poly_distance(const Polynomial& p, const Polynomial& q, double a, double b) {
  return rms_on_interval([&](double t) { return p.eval(t) - q.eval(t); }, a, b);
}

}  // namespace sparsetone
