#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sparsetone/errors.hpp"
#include "sparsetone/polynomial.hpp"
#include "test_helpers.hpp"

using namespace sparsetone;
using namespace sparsetone::testing;

TEST_CASE("generate_intervals geometry") {
  SUBCASE("d=0, eps=1 pins m=10 and tiles [-1,1]") {
    const auto part = generate_intervals(0, 1.0);
    CHECK(part.m == 10);
    CHECK(part.size() <= 202);
    CHECK(part.intervals.front().first == doctest::Approx(-1.0));
    CHECK(part.intervals.back().second == doctest::Approx(1.0));
  }
  for (auto [d, eps] : std::vector<std::pair<int, double>>{{0, 1.0}, {10, 0.05}, {10, 1.25}, {30, 0.05}, {100, 0.4}}) {
    CAPTURE(d);
    CAPTURE(eps);
    const auto part = generate_intervals(d, eps);
    const int m = part.m;
    CHECK(m == int(std::ceil(10.0 * std::max(d, 1) / eps)));
    CHECK(part.size() <= 20 * m + 2);

    // exact tiling, weights sum to 1
    double wsum = 0.0;
    for (double w : part.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 1; i < part.size(); ++i)
      CHECK(part.intervals[i].first == doctest::Approx(part.intervals[i - 1].second).epsilon(1e-14));

    // paper Eq.(7) width form on interior intervals, 9/m^2 caps at the edges
    const double cap = 9.0 / (double(m) * m);
    for (const auto& [lo, hi] : part.intervals) {
      const bool edge = (hi == 1.0) || (lo == -1.0);
      if (edge) {
        CHECK(hi - lo <= cap * (1 + 1e-9));
        continue;
      }
      const double xworst = std::max(std::abs(lo), std::abs(hi));
      CHECK(hi - lo <= std::sqrt(2.0 * (1.0 - xworst * xworst)) / m * (1 + 1e-9));
    }
    // per-side interval count within the paper's l <= 10m bound
    CHECK((part.size() - 2) / 2 <= 10 * m);
  }
}

TEST_CASE("weighted_least_squares examples") {
  auto const_row = [](double, cplx* row) { row[0] = cplx{1.0, 0.0}; };
  SUBCASE("mean") {
    const auto c = weighted_least_squares(const_row, 1, {{0.0, {0.0, 0.0}, 1.0}, {1.0, {2.0, 0.0}, 1.0}});
    CHECK(std::abs(c(0) - cplx{1.0, 0.0}) < 1e-12);
  }
  SUBCASE("weighted mean: minimize c^2 + 2(c-3)^2 => c=2") {
    const auto c = weighted_least_squares(const_row, 1, {{0.0, {0.0, 0.0}, 1.0}, {1.0, {3.0, 0.0}, 2.0}});
    CHECK(std::abs(c(0) - cplx{2.0, 0.0}) < 1e-12);
  }
  SUBCASE("exact polynomial samples reproduce coefficients") {
    RngStream rng(3);
    const Polynomial p = random_poly(6, -1.0, 1.0, rng);
    std::vector<WeightedSample> samples;
    for (int i = 0; i < 25; ++i) {
      const double t = rng.uniform(-1.0, 1.0);
      samples.push_back({t, p.eval(t), 0.3 + rng.uniform()});
    }
    auto row = [](double t, cplx* r) {
      cplx v{1.0, 0.0};
      for (int j = 0; j < 7; ++j) {
        r[j] = v;
        v *= t;
      }
    };
    const auto c = weighted_least_squares(row, 7, samples);
    for (int j = 0; j < 7; ++j) CHECK(std::abs(c(j) - p.coeffs()[j]) < 1e-8);
  }
  SUBCASE("rank-deficient design throws") {
    auto dup_row = [](double t, cplx* r) { r[0] = cplx{t, 0.0}; r[1] = cplx{t, 0.0}; };
    CHECK_THROWS_AS(
        weighted_least_squares(dup_row, 2, {{0.5, {1.0, 0.0}, 1.0}, {1.0, {2.0, 0.0}, 1.0}, {2.0, {1.0, 0.0}, 1.0}}),
        SingularDesignError);
  }
}

TEST_CASE("robust_poly_learn noiseless and d=0") {
  RngStream rng(17);
  SUBCASE("P(t)=t^2 exactly recovered") {
    SignalSource src([](double t) { return cplx{t * t, 0.0}; }, "t2");
    const Polynomial q = robust_poly_learn(src, 2, 1.0, rng);
    const double err = rms_on_interval([&](double t) { return q.eval(t) - cplx{t * t, 0.0}; }, 0.0, 1.0);
    const double nrm = rms_on_interval([](double t) { return cplx{t * t, 0.0}; }, 0.0, 1.0);
    CHECK(err <= 1e-8 * nrm);
  }
  SUBCASE("d=0 returns the weighted sample mean") {
    SignalSource src([](double) { return cplx{2.5, -1.0}; }, "const");
    const Polynomial q = robust_poly_learn(src, 0, 1.0, rng);
    CHECK(std::abs(q.eval(0.3) - cplx{2.5, -1.0}) < 1e-10);
  }
}

TEST_CASE("sample count is O(d) within the 25d+10 budget") {
  RngStream rng(23);
  for (int d : {5, 10, 20, 30}) {
    SignalSource src([](double t) { return cplx{t, 0.0}; }, "lin");
    const auto before = src.samples_taken();
    (void)robust_poly_learn(src, d, 1.0, rng);
    const auto used = src.samples_taken() - before;
    CAPTURE(d);
    CHECK(used <= std::uint64_t(25 * d + 10));
    CHECK(used >= std::uint64_t(d + 1));
    CHECK(used == std::uint64_t(generate_intervals(d, PolyLearnOptions{}.eps).size()));
  }
}

TEST_CASE("robust learn under white noise: Chebyshev T10 Monte Carlo") {
  const double sigma = 0.5;
  const Polynomial truth = chebyshev_poly(10, 0.0, 1.0);
  int ok = 0;
  for (int seed = 0; seed < 100; ++seed) {
    RngStream rng(1000 + seed);
    SignalSource clean = poly_source(truth);
    SignalSource noisy = with_noise(clean, {.kind = NoiseKind::GaussianWhite, .level = sigma}, 1.0, rng);
    const Polynomial q = robust_poly_learn(noisy, 10, 1.0, rng);
    const double err = rms_on_interval([&](double t) { return q.eval(t) - truth.eval(t); }, 0.0, 1.0);
    if (err <= 10.0 * sigma) ++ok;
  }
  CHECK(ok >= 95);
}

TEST_CASE("boosted learner") {
  SUBCASE("noiseless equals the single run") {
    RngStream r1(5), r2(5), rp(42);
    const Polynomial truth = random_poly(8, 0.0, 1.0, rp);
    SignalSource src = poly_source(truth);
    const Polynomial single = robust_poly_learn(src, 8, 1.0, r1);
    const Polynomial boosted = robust_poly_learn_boosted(src, 8, 1.0, 0.01, r2);
    CHECK(poly_distance(single, boosted, 0.0, 1.0) < 1e-8);
  }
  SUBCASE("p=0.5 runs R>=4 times with sample count R*n") {
    RngStream rng(6);
    SignalSource src([](double t) { return cplx{t, 0.0}; }, "lin");
    const auto before = src.samples_taken();
    (void)robust_poly_learn_boosted(src, 4, 1.0, 0.5, rng);
    const auto used = src.samples_taken() - before;
    const auto n = std::uint64_t(generate_intervals(4, PolyLearnOptions{}.eps).size());
    CHECK(used == 4 * n);
  }
  SUBCASE("median survives an injected garbage run") {
    // R=9 clean runs of which one is replaced by a corrupted signal view:
    // emulate by learning from a source that returns garbage on one fork.
    // Direct check of the median step: learn boosted on a noisy source and
    // compare against the clean truth.
    const Polynomial truth = chebyshev_poly(6, 0.0, 1.0);
    RngStream rng(77);
    int call = 0;
    SignalSource evil(
        [&truth, &call](double t) {
          ++call;
          // one contiguous block of samples (one inner run) is corrupted
          const bool corrupt = call > 200 && call <= 400;
          return truth.eval(t) + (corrupt ? cplx{50.0, -20.0} : cplx{0.0, 0.0});
        },
        "evil");
    PolyLearnOptions opt;
    opt.boost_cr = 9.0;  // 9 runs at p=1/2
    const Polynomial q = robust_poly_learn_boosted(evil, 6, 1.0, 0.5, rng, opt);
    const double err = poly_distance(q, truth, 0.0, 1.0);
    const double nrm = rms_on_interval([&](double t) { return truth.eval(t); }, 0.0, 1.0);
    CHECK(err <= 0.05 * nrm);
  }
}

TEST_CASE("poly_max_avg_ratio") {
  Polynomial c({{2.0, 0.0}}, -1.0, 1.0);
  CHECK(poly_max_avg_ratio(c, -1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-9));

  Polynomial lin({{0.0, 0.0}, {1.0, 0.0}}, -1.0, 1.0);
  CHECK(poly_max_avg_ratio(lin, -1.0, 1.0) == doctest::Approx(3.0).epsilon(1e-6));

  for (int d : {2, 5, 10, 20}) {
    const Polynomial L = legendre_poly(d, -1.0, 1.0);
    const double ratio = poly_max_avg_ratio(L, -1.0, 1.0);
    CHECK(ratio <= (d + 1.0) * (d + 1.0) * 1.01);
    // Legendre max/avg is (2d+1): approaches the square-sum structure
    CHECK(ratio == doctest::Approx(2.0 * d + 1.0).epsilon(1e-3));
  }

  Polynomial zero({{0.0, 0.0}}, -1.0, 1.0);
  CHECK(poly_max_avg_ratio(zero, -1.0, 1.0) == 0.0);
}

TEST_CASE("multipoint_evaluate") {
  Polynomial one({{1.0, 0.0}}, -1.0, 1.0);
  for (const cplx& v : multipoint_evaluate(one, {-0.3, 0.1, 0.9})) CHECK(std::abs(v - cplx{1.0, 0.0}) < 1e-15);

  Polynomial cube({{0, 0}, {0, 0}, {0, 0}, {1.0, 0.0}}, -1.0, 1.0);
  CHECK(std::abs(multipoint_evaluate(cube, {2.0})[0] - cplx{8.0, 0.0}) < 1e-12);

  // independent term-by-term summation oracle
  RngStream rng(13);
  const Polynomial p = random_poly(10, -1.0, 1.0, rng);
  const auto pts = linspace(-1.0, 1.0, 100);
  const auto got = multipoint_evaluate(p, pts);
  for (size_t i = 0; i < pts.size(); ++i) {
    cplx direct{0.0, 0.0};
    for (int j = 0; j <= 10; ++j) direct += p.coeffs()[j] * std::pow(pts[i], j);
    CHECK(std::abs(got[i] - direct) <= 1e-12 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("norm preservation (Corollary 4.2 form) at eps=1/20") {
  RngStream rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + int(rng.uniform_index(30));
    const Polynomial p = random_poly(d, -1.0, 1.0, rng);
    const auto part = generate_intervals(d, 1.0 / 20.0);
    double emp = 0.0;
    for (int j = 0; j < part.size(); ++j) {
      const double t = rng.uniform(part.intervals[j].first, part.intervals[j].second);
      emp += part.weights[j] * std::norm(p.eval(t));
    }
    const double nrm2 =
        integrate_simpson([&](double t) { return std::norm(p.eval(t)); }, -1.0, 1.0, 1 << 13) / 2.0;
    const double ratio = std::sqrt(emp / nrm2);
    CHECK(ratio >= 0.9);
    CHECK(ratio <= 1.1);
  }
}

TEST_CASE("norm concentration also holds at the learning density") {
  RngStream rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + int(rng.uniform_index(30));
    const Polynomial p = random_poly(d, -1.0, 1.0, rng);
    const auto part = generate_intervals(d, PolyLearnOptions{}.eps);
    double emp = 0.0;
    for (int j = 0; j < part.size(); ++j) {
      const double t = rng.uniform(part.intervals[j].first, part.intervals[j].second);
      emp += part.weights[j] * std::norm(p.eval(t));
    }
    const double nrm2 =
        integrate_simpson([&](double t) { return std::norm(p.eval(t)); }, -1.0, 1.0, 1 << 13) / 2.0;
    const double ratio = std::sqrt(emp / nrm2);
    CHECK(ratio >= 0.8);
    CHECK(ratio <= 1.2);
  }
}

TEST_CASE("Bernstein-type derivative bound (Lemma 4.3 form)") {
  RngStream rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + int(rng.uniform_index(25));
    const Polynomial p = random_poly(d, -1.0, 1.0, rng);
    std::vector<cplx> dc(std::max(1, d));
    for (int j = 1; j <= d; ++j) dc[j - 1] = double(j) * p.coeffs()[j];
    const Polynomial dp(std::move(dc), -1.0, 1.0);
    const double lhs = integrate_simpson(
        [&](double t) { return (1.0 - t * t) * std::norm(dp.eval(t)); }, -1.0, 1.0, 1 << 13);
    const double rhs = integrate_simpson([&](double t) { return std::norm(p.eval(t)); }, -1.0, 1.0, 1 << 13);
    CHECK(lhs <= 2.0 * d * d * rhs * (1 + 1e-9));
  }
}

TEST_CASE("affine equivariance of learning") {
  const double T = 2.5;
  const Polynomial truth = chebyshev_poly(7, 0.0, T);
  SignalSource on_T = poly_source(truth);
  // the same polynomial seen through the map t -> (2t-T)/T
  SignalSource on_unit([&truth, T](double tau) { return truth.eval(T * (tau + 1.0) / 2.0); }, "mapped");

  RngStream r1(99), r2(99);
  const Polynomial qT = robust_poly_learn(on_T, 7, T, r1);
  const Polynomial qU = robust_poly_learn_on(on_unit, 7, -1.0, 1.0, r2);
  REQUIRE(qT.degree() == qU.degree());
  for (int j = 0; j <= 7; ++j) CHECK(std::abs(qT.coeffs()[j] - qU.coeffs()[j]) < 1e-8);
}
