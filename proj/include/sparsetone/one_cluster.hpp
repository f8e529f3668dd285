#pragma once

#include "sparsetone/filters.hpp"
#include "sparsetone/model.hpp"
#include "sparsetone/rng.hpp"
#include "sparsetone/signal.hpp"

namespace sparsetone {

struct OneClusterParams {
  double T = 1.0;
  double F = 100.0;
  double Delta = 1.0;  // cluster half-width the caller vouches for

  int R_est = 0;       // 0 => ceil((T*Delta)^2), clamped to [8, 1e6]
  int R_repeats = 0;   // 0 => ceil((T*Delta)^3), clamped to [8, 1e6]
  int t_regions = 0;   // 0 => clamp(4*ceil(log2(F*T)), 16, 128)
  int R_loc = 20;      // votes per round
  int D_max = 0;       // 0 => ceil(log_{t/4}(F/Delta)) + 1
  double c_vote = 0.5;
  double c_beta = 0.125;       // beta cap constant (knob; see notes)
  double repeat_scale = 1.0;   // desk-scale multiplier on R_est/R_repeats
  int R_median = 7;            // locate repetitions for the median (2k+5)
  int degree_cap = 40;
  double boost_fail_prob = 1.0 / 1024.0;

  static OneClusterParams defaults(double T, double F, double Delta, int k = 1);
  double beta_cap() const;  // c_beta * T / (T*Delta)^{3/2}
  void validate() const;
};

// sqrt(mean |z(alpha_i)|^2) over R_est uniform alpha in [0,T].
double get_empirical_1_energy(const SignalSource& z, const OneClusterParams& p, RngStream& rng);

struct LegalSample {
  double alpha = 0.0;
  cplx z0{0.0, 0.0};  // z(alpha)
  cplx z1{0.0, 0.0};  // z(alpha + beta)
};

// Heavy-filtered, energy-weighted two-point draw. Throws EnergyTooLowError
// when no draw clears 0.5*z_emp.
LegalSample get_legal_1_sample(const SignalSource& z, const OneClusterParams& p, double beta, double z_emp,
                               RngStream& rng);

// Multi-scale phase voting. Throws LocationFailedError when no region wins a
// majority.
double locate_1_signal(const SignalSource& z, const OneClusterParams& p, double z_emp, RngStream& rng);

// Median of R_median locate runs; fails only if more than half of them fail.
double frequency_recovery_1cluster(const SignalSource& z, const OneClusterParams& p, RngStream& rng);

struct OneClusterResult {
  MixedBasisModel model;
  double f_tilde = 0.0;
  double residual_rms = 0.0;  // post-fit residual estimate
  std::uint64_t n_samples = 0;
};

// Full one-cluster pipeline: locate on z = x*H, demodulate x, fit a degree-d
// polynomial with the boosted learner.
OneClusterResult cft_1cluster(const SignalSource& x, const FilterH& h, const OneClusterParams& p, RngStream& rng);

// Candidate enumeration + voting helper shared with the k-cluster path:
// every frequency consistent with the observed phase (phi at time shift tau)
// inside [lo, lo + t*w] votes for its region and both neighbors.
// Each observation contributes at most one vote per region.
void vote_phase_candidates(double phi, double tau, double lo, double w, int t_regions, std::vector<int>& votes);

}  // namespace sparsetone
