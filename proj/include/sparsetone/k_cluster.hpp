#pragma once

#include <cstdint>
#include <vector>

#include "sparsetone/filters.hpp"
#include "sparsetone/hashing.hpp"
#include "sparsetone/model.hpp"
#include "sparsetone/one_cluster.hpp"
#include "sparsetone/signal.hpp"

namespace sparsetone {

// Full pipeline configuration. Zeroed fields are derived by normalized().
struct RecoveryConfig {
  double T = 1.0;
  double F = 1000.0;
  int k = 1;
  double delta = 0.05;
  double Delta = 0.0;    // locate cluster width; 0 => max(1, c_delta*k^2)/T
  double Delta_h = 0.0;  // 0 => taken from the built FilterH
  int B = 0;             // 0 => next_pow2(max(4, 2k)); always forced to a power of two
  std::uint64_t seed = 0;

  // scale knobs
  double c_delta = 0.5;
  double repeat_scale = 0.25;  // multiplies (T*Delta)^2 / (T*Delta)^3
  int r_loc = 12;
  int t_regions = 0;  // 0 => derive from F*T
  double c_beta = 0.125;
  double alpha = 0.5;       // filter-G transition fraction
  double bin_floor = 0.15;  // bins below bin_floor*max(z_emp) stay inactive
  int degree_cap = 24;      // mixed-basis polynomial degree
  double c_m = 0.08;        // regression samples: c_m*dim^2*ln(dim)
  int m_cap = 200000;
  int m_floor = 1200;
  int stage_runs = 0;  // 0 => 2k+5
  int boost_runs = 0;  // 0 => 2k+5
  int list_cap = 0;    // 0 => 4k

  HKnobs h_knobs;
  GKnobs g_knobs;

  RecoveryConfig normalized() const;  // fills derived fields, validates
  void validate() const;
};

struct FrequencyList {
  std::vector<double> freqs;  // sorted ascending
};

// RMS per bin of |u^_j| over R_est HashToBins calls at uniform a in [0, T/sigma].
std::vector<double> get_empirical_k_energy(const SignalSource& windowed_x, const FilterG& g, const HashConfig& base,
                                           const OneClusterParams& p, RngStream& rng);

struct KLegalSample {
  std::vector<cplx> v0, v1;   // per-bin pair, time shift tau apart
  std::vector<char> active;   // bins whose heavy set was non-empty
};

// R_repeats paired HashToBins calls at (a, a + tau/sigma); per bin a weighted
// draw among the heavy pairs. Inactive bins carry a flag, never an error.
KLegalSample get_legal_k_sample(const SignalSource& windowed_x, const FilterG& g, const HashConfig& base,
                                const OneClusterParams& p, double tau, const std::vector<double>& z_emp,
                                RngStream& rng);

// One hashing (sigma,b) pass: empirical energies, then per-bin lockstep phase
// voting. Returns candidate frequencies of bins that kept a majority.
FrequencyList one_stage(const SignalSource& windowed_x, const FilterG& g, const HashConfig& base,
                        const OneClusterParams& p, double bin_floor, RngStream& rng);

// Union, sort, and keep every ceil(R/2)-th entry.
FrequencyList merged_stages(const std::vector<FrequencyList>& lists);

// 2k+5 OneStage passes with fresh (sigma, b), merged.
FrequencyList frequency_recovery_k_cluster(const SignalSource& x, const FilterH& h, const FilterG& g,
                                           const RecoveryConfig& cfg, RngStream& rng);

// Least-squares fit of x onto span{ tau(t)^j e^{2 pi i f_i t} }.
MixedBasisModel signal_recovery_k_cluster(const SignalSource& x, const FrequencyList& freqs,
                                          const RecoveryConfig& cfg, RngStream& rng);

// R parallel fits, coordinatewise median at fresh points, final regression.
MixedBasisModel signal_recovery_k_cluster_boosted(const SignalSource& x, const FrequencyList& freqs,
                                                  const RecoveryConfig& cfg, RngStream& rng);

// End-to-end pipeline. `truth` (optional) only feeds the err_T diagnostic.
RecoveryReport cft_k_cluster(const SignalSource& x, const RecoveryConfig& cfg, RngStream& rng,
                             const FourierSparseSignal* truth = nullptr);

// Locate parameters the k-path derives from a RecoveryConfig.
OneClusterParams k_locate_params(const RecoveryConfig& cfg);

int next_pow2(int n);

}  // namespace sparsetone
