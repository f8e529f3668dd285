#pragma once

#include <vector>

#include "sparsetone/filters.hpp"
#include "sparsetone/signal.hpp"

namespace sparsetone {

// Permutation/hash parameters. a is the dimensionless time shift (sigma*a is
// the window center in seconds); B*D equals the filter-G support in samples.
struct HashConfig {
  double sigma = 1.0;  // seconds per sample step
  double a = 0.0;
  double b = 0.0;  // Hz
  int B = 2;
  int D = 1;
};

bool is_pow2(int n);

// (P_{sigma,a,b} x)(t) = x(sigma(t-a)) e^{-2 pi i sigma b t}
SignalSource permute(const SignalSource& src, const HashConfig& cfg);

// round(((sigma(f-b)) mod 1) * B) mod B, round-half-to-even.
int hash_freq(const HashConfig& cfg, double f);

// In-place iterative radix-2 FFT, forward sign e^{-2 pi i}.
void fft_radix2(std::vector<cplx>& v, bool inverse = false);

// Takes exactly B*D samples of `windowed` (= x*H) at sigma(n - BD/2 + a),
// modulates, multiplies by the G window, aliases D blocks onto B and DFTs.
// With the post-DFT phase correction, u^[j] = z_j(sigma*a) exactly, where
// z_j^(f) = (x*H)^(f) * G^dis(j/B - sigma(f-b)).
std::vector<cplx> hash_to_bins(const SignalSource& windowed, const FilterG& g, const HashConfig& cfg);

}  // namespace sparsetone
