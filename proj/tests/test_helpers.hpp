#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "sparsetone/polynomial.hpp"
#include "sparsetone/rng.hpp"
#include "sparsetone/signal.hpp"

namespace sparsetone::testing {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Random polynomial with iid standard-normal complex coefficients in the
// mapped-monomial basis.
inline Polynomial random_poly(int degree, double t0, double t1, RngStream& rng) {
  std::vector<cplx> coeffs(degree + 1);
  for (cplx& c : coeffs) c = cplx{rng.gaussian(), rng.gaussian()};
  return Polynomial(std::move(coeffs), t0, t1);
}

// Chebyshev T_n on [-1,1] mapped onto [t0,t1], monomial coefficients by the
// recurrence T_{n+1} = 2 t T_n - T_{n-1}.
inline Polynomial chebyshev_poly(int n, double t0, double t1) {
  std::vector<std::vector<double>> T{{1.0}, {0.0, 1.0}};
  for (int i = 2; i <= n; ++i) {
    std::vector<double> c(i + 1, 0.0);
    for (size_t j = 0; j < T[i - 1].size(); ++j) c[j + 1] += 2.0 * T[i - 1][j];
    for (size_t j = 0; j < T[i - 2].size(); ++j) c[j] -= T[i - 2][j];
    T.push_back(std::move(c));
  }
  std::vector<cplx> coeffs(T[n].begin(), T[n].end());
  return Polynomial(std::move(coeffs), t0, t1);
}

// Legendre L_n via (n+1) L_{n+1} = (2n+1) t L_n - n L_{n-1}.
inline Polynomial legendre_poly(int n, double t0, double t1) {
  std::vector<std::vector<double>> L{{1.0}, {0.0, 1.0}};
  for (int i = 1; i < n; ++i) {
    std::vector<double> c(i + 2, 0.0);
    for (size_t j = 0; j < L[i].size(); ++j) c[j + 1] += (2.0 * i + 1.0) * L[i][j];
    for (size_t j = 0; j < L[i - 1].size(); ++j) c[j] -= i * L[i - 1][j];
    for (double& v : c) v /= (i + 1.0);
    L.push_back(std::move(c));
  }
  std::vector<cplx> coeffs(L[n].begin(), L[n].end());
  return Polynomial(std::move(coeffs), t0, t1);
}

// k tones all inside [f0 - width/2, f0 + width/2], unit-ish amplitudes.
inline FourierSparseSignal cluster_fixture(int k, double f0, double width, RngStream& rng) {
  std::vector<Tone> tones;
  for (int i = 0; i < k; ++i) {
    const double ph = rng.uniform(0.0, 2.0 * std::numbers::pi);
    tones.push_back({f0 + (rng.uniform() - 0.5) * width, cplx{std::cos(ph), std::sin(ph)}});
  }
  return FourierSparseSignal(std::move(tones));
}

inline SignalSource poly_source(const Polynomial& p) {
  return SignalSource([p](double t) { return p.eval(t); }, "poly");
}

}  // namespace sparsetone::testing
