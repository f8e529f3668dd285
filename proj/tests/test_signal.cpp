#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <thread>

#include "sparsetone/errors.hpp"
#include "sparsetone/signal.hpp"
#include "test_helpers.hpp"

using namespace sparsetone;
using namespace sparsetone::testing;

TEST_CASE("eval_sparse basics") {
  FourierSparseSignal dc({{0.0, {1.0, 0.0}}});
  CHECK(std::abs(dc.eval(0.37) - cplx{1.0, 0.0}) < 1e-15);

  FourierSparseSignal tone({{1.0, {1.0, 0.0}}});
  CHECK(std::abs(tone.eval(0.25) - cplx{0.0, 1.0}) < 1e-15);

  // direct complex arithmetic oracle: e^{i pi/3} + e^{-i pi/3} = 2 cos(pi/3)
  FourierSparseSignal pair({{1.0, {1.0, 0.0}}, {-1.0, {1.0, 0.0}}});
  const cplx oracle = std::exp(cplx{0, std::numbers::pi / 3.0}) + std::exp(cplx{0, -std::numbers::pi / 3.0});
  CHECK(std::abs(pair.eval(1.0 / 6.0) - oracle) < 1e-14);
  CHECK(std::abs(pair.eval(1.0 / 6.0) - cplx{1.0, 0.0}) < 1e-14);
}

TEST_CASE("duplicate frequencies merge") {
  FourierSparseSignal s({{2.0, {1.0, 0.0}}, {2.0, {0.5, 0.5}}});
  CHECK(s.k() == 1);
  CHECK(std::abs(s.tones()[0].amp - cplx{1.5, 0.5}) < 1e-15);
}

TEST_CASE("norm_T closed forms") {
  CHECK(rel_err(norm_T([](double) { return cplx{3.0, 4.0}; }, 2.0), 5.0) < 1e-12);
  CHECK(rel_err(norm_T([](double t) {
          const double ph = 2 * std::numbers::pi * 7.3 * t;
          return cplx{std::cos(ph), std::sin(ph)};
        }, 1.7),
        1.0) < 1e-12);
  // closed-form integral: ||sin(2 pi t)||_1 = 1/sqrt(2)
  CHECK(rel_err(norm_T([](double t) { return cplx{std::sin(2 * std::numbers::pi * t), 0.0}; }, 1.0),
                1.0 / std::sqrt(2.0)) < 1e-10);
}

TEST_CASE("norm_T rejects non-finite samples") {
  CHECK_THROWS_AS(norm_T([](double t) { return cplx{t > 0.5 ? std::nan("") : 0.0, 0.0}; }, 1.0), NumericalError);
}

TEST_CASE("gen_signal") {
  RngStream rng(7);
  SignalGenSpec one{.k = 1, .freq_limit = 100.0};
  const auto s1 = gen_signal(one, rng);
  CHECK(s1.k() == 1);
  CHECK(std::abs(s1.tones()[0].freq) <= 100.0);

  SignalGenSpec gap{.k = 3, .freq_limit = 10.0, .min_gap = 1.0};
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = gen_signal(gap, rng);
    REQUIRE(s.k() == 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < i; ++j) CHECK(std::abs(s.tones()[i].freq - s.tones()[j].freq) >= 1.0);
  }

  SignalGenSpec clustered;
  clustered.k = 2;
  clustered.cluster_layout = {{5.0, 0.01, 2}};
  const auto sc = gen_signal(clustered, rng);
  REQUIRE(sc.k() == 2);
  for (const Tone& t : sc.tones()) {
    CHECK(t.freq >= 4.995);
    CHECK(t.freq <= 5.005);
  }

  SignalGenSpec infeasible{.k = 10, .freq_limit = 1.0, .min_gap = 1.0};
  CHECK_THROWS_AS(gen_signal(infeasible, rng), ConfigError);
}

TEST_CASE("with_noise") {
  RngStream rng(11);
  FourierSparseSignal tone({{3.0, {1.0, 0.0}}});
  SignalSource clean = make_source(tone);

  SUBCASE("kind none is exact") {
    SignalSource out = with_noise(clean, {.kind = NoiseKind::None}, 1.0, rng);
    for (double t : linspace(0.0, 1.0, 70)) CHECK(out.sample(t) == clean.peek(t));
  }
  SUBCASE("level 0 equals none") {
    SignalSource out = with_noise(clean, {.kind = NoiseKind::GaussianWhite, .level = 0.0}, 1.0, rng);
    for (double t : linspace(0.0, 1.0, 70)) CHECK(out.sample(t) == clean.peek(t));
  }
  SUBCASE("gaussian level calibrated on zero signal") {
    SignalSource zero;
    for (int seed = 0; seed < 5; ++seed) {
      RngStream r(100 + seed);
      SignalSource g = with_noise(zero, {.kind = NoiseKind::GaussianWhite, .level = 0.1}, 1.0, r);
      const double realized = norm_T([&](double t) { return g.peek(t); }, 1.0);
      CHECK(realized > 0.09);
      CHECK(realized < 0.11);
    }
  }
  SUBCASE("gaussian noise is a deterministic function of t") {
    SignalSource g = with_noise(clean, {.kind = NoiseKind::GaussianWhite, .level = 0.3}, 1.0, rng);
    CHECK(g.sample(0.123456) == g.sample(0.123456));
  }
  SUBCASE("adversarial-sparse calibrated") {
    SignalSource zero;
    SignalSource g = with_noise(zero, {.kind = NoiseKind::AdversarialSparse, .level = 0.2}, 1.0, rng);
    CHECK(rel_err(norm_T([&](double t) { return g.peek(t); }, 1.0), 0.2) < 0.02);
  }
}

TEST_CASE("gram_matrix closed form") {
  const auto g1 = gram_matrix({3.7}, 2.0);
  CHECK(g1.rows() == 1);
  CHECK(std::abs(g1(0, 0) - cplx{1.0, 0.0}) < 1e-15);

  const double T = 0.8;
  const auto g2 = gram_matrix({0.0, 1.0 / T}, T);
  CHECK(std::abs(g2(0, 1)) < 1e-14);  // full-period orthogonality

  // quadrature oracle for the half-period pair
  const auto g3 = gram_matrix({0.0, 1.0 / (2.0 * T)}, T);
  const cplx direct = integrate_simpson(
                          [&](double t) {
                            const double ph = 2 * std::numbers::pi * (1.0 / (2 * T)) * t;
                            return cplx{std::cos(ph), std::sin(ph)};
                          },
                          0.0, T, 1 << 12) /
                      T;
  CHECK(std::abs(g3(1, 0) - direct) < 1e-10);
  CHECK(rel_err(std::abs(g3(0, 1)), 2.0 / std::numbers::pi) < 1e-10);
}

TEST_CASE("gram_matrix PSD over random frequency sets") {
  RngStream rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + int(rng.uniform_index(6));
    std::vector<double> freqs;
    for (int i = 0; i < k; ++i) freqs.push_back(rng.uniform(-50.0, 50.0));
    const auto G = gram_matrix(freqs, 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
  }
}

TEST_CASE("norm_T matches v* Gram v to 1e-6") {
  RngStream rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 1 + int(rng.uniform_index(5));
    std::vector<Tone> tones;
    std::vector<double> freqs;
    Eigen::VectorXcd v(k);
    for (int i = 0; i < k; ++i) {
      const double f = rng.uniform(-20.0, 20.0);
      const cplx a{rng.gaussian(), rng.gaussian()};
      tones.push_back({f, a});
      freqs.push_back(f);
      v(i) = a;
    }
    FourierSparseSignal sig(tones);
    const auto G = gram_matrix(freqs, 1.0);
    const double closed = std::real((v.transpose() * G * v.conjugate())(0));
    const double quad = norm_T([&](double t) { return sig.eval(t); }, 1.0);
    CHECK(rel_err(quad * quad, closed) < 1e-6);
  }
}

TEST_CASE("dense spectrum oracle") {
  SUBCASE("zero signal") {
    auto spec = dense_spectrum_oracle([](double) { return cplx{0, 0}; }, 0.0, 1.0, linspace(-5, 5, 21), 1 << 10);
    for (const auto& p : spec) CHECK(p.power == 0.0);
  }
  SUBCASE("single tone peak dominates") {
    FourierSparseSignal tone({{4.0, {1.0, 0.0}}});
    auto fg = linspace(-10.0, 10.0, 201);
    auto spec = dense_spectrum_oracle([&](double t) { return tone.eval(t); }, 0.0, 1.0, fg, 1 << 12);
    double peak = 0.0, off = 0.0;
    for (const auto& p : spec) {
      if (std::abs(p.freq - 4.0) < 0.05)
        peak = std::max(peak, p.power);
      else if (std::abs(p.freq - 4.0) > 2.0)
        off = std::max(off, p.power);
    }
    CHECK(peak >= 10.0 * off);
  }
  SUBCASE("two equal tones give equal peaks") {
    FourierSparseSignal two({{-6.0, {1.0, 0.0}}, {6.0, {1.0, 0.0}}});
    auto spec = dense_spectrum_oracle([&](double t) { return two.eval(t); }, 0.0, 1.0, {-6.0, 6.0}, 1 << 12);
    CHECK(rel_err(spec[0].power, spec[1].power) < 0.01);
  }
}

TEST_CASE("growth bound inside the interval (k^4 log^3 k form)") {
  RngStream rng(21);
  const double T = 1.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + int(rng.uniform_index(8));
    SignalGenSpec spec{.k = k, .freq_limit = 40.0};
    const auto sig = gen_signal(spec, rng);
    double mx = 0.0, mean = 0.0;
    const int n = 10000;
    for (int i = 0; i <= n; ++i) {
      const double v = std::norm(sig.eval(T * i / n));
      mx = std::max(mx, v);
      mean += v;
    }
    mean /= (n + 1);
    const double bound = std::pow(double(k), 4.0) * std::pow(std::log(double(k)) + 2.0, 3.0) * 10.0;
    CHECK(mx <= bound * mean);
  }
}

TEST_CASE("growth bound outside the interval ((2kt/T)^{2.5k} form)") {
  RngStream rng(22);
  const double T = 1.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + int(rng.uniform_index(8));
    SignalGenSpec spec{.k = k, .freq_limit = 40.0};
    const auto sig = gen_signal(spec, rng);
    const double nrm2 = std::pow(norm_T([&](double t) { return sig.eval(t); }, T, {1 << 12, 1e-6}), 2);
    const double outside = std::norm(sig.eval(2.0 * T));
    const double bound = std::pow(double(k), 7.0) * std::pow(4.0 * k, 2.5 * k);
    CHECK(outside <= bound * nrm2);
  }
}

TEST_CASE("sample counter accounting and thread safety") {
  FourierSparseSignal tone({{1.0, {1.0, 0.0}}});
  SignalSource src = make_source(tone);
  for (int i = 0; i < 137; ++i) (void)src.sample(0.01 * i);
  CHECK(src.samples_taken() == 137);
  (void)src.peek(0.0);
  CHECK(src.samples_taken() == 137);

  // wrapped sources pass increments through to the shared counter
  SignalSource wrapped([src](double t) { return 2.0 * src.sample(t); }, "scaled");
  (void)wrapped.sample(0.5);
  CHECK(src.samples_taken() == 138);

  std::vector<std::thread> threads;
  for (int w = 0; w < 4; ++w)
    threads.emplace_back([&src] {
      for (int i = 0; i < 10000; ++i) (void)src.sample(1e-4 * i);
    });
  for (auto& t : threads) t.join();
  CHECK(src.samples_taken() == 138 + 40000);
}
