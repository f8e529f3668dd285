#include "sparsetone/one_cluster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sparsetone/errors.hpp"
#include "sparsetone/polynomial.hpp"

namespace sparsetone {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kRepeatCap = 1000000;

int clamp_count(double v, const char* what) {
  if (v > kRepeatCap) {
    std::fprintf(stderr, "sparsetone: %s capped at %d (requested %.3g)\n", what, kRepeatCap, v);
    return kRepeatCap;
  }
  return std::max(8, static_cast<int>(std::ceil(v)));
}

double median_of(std::vector<double> v) {
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 0) {
    const double lo = *std::max_element(v.begin(), v.begin() + mid);
    return (lo + hi) / 2.0;
  }
  return hi;
}
}  // namespace

OneClusterParams OneClusterParams::defaults(double T, double F, double Delta, int k) {
  OneClusterParams p;
  p.T = T;
  p.F = F;
  p.Delta = Delta;
  p.R_median = 2 * k + 5;
  p.boost_fail_prob = std::pow(2.0, -double(std::max(6, k + 5)));
  return p;
}

double OneClusterParams::beta_cap() const {
  const double td = T * Delta;
  return c_beta * T / std::pow(std::max(td, 1e-9), 1.5);
}

void OneClusterParams::validate() const {
  if (!(T > 0) || !(F > 0) || !(Delta > 0)) throw ConfigError("OneClusterParams: T, F, Delta must be positive");
  if (R_loc < 1 || R_median < 1 || c_vote <= 0 || c_beta <= 0 || repeat_scale <= 0)
    throw ConfigError("OneClusterParams: counts and constants must be positive");
}

namespace {
struct ResolvedParams {
  int R_est, R_repeats, t_regions, D_max;
};

ResolvedParams resolve(const OneClusterParams& p) {
  p.validate();
  const double td = std::max(p.T * p.Delta, 1e-9);
  ResolvedParams r;
  r.R_est = p.R_est > 0 ? p.R_est : clamp_count(p.repeat_scale * td * td, "R_est");
  r.R_repeats = p.R_repeats > 0 ? p.R_repeats : clamp_count(p.repeat_scale * td * td * td, "R_repeats");
  r.t_regions =
      p.t_regions > 0
          ? p.t_regions
          : std::clamp(4 * static_cast<int>(std::ceil(std::log2(std::max(p.F * p.T, 2.0)))), 16, 128);
  if (p.D_max > 0) {
    r.D_max = p.D_max;
  } else {
    const double shrink = std::max(r.t_regions / 4.0, 2.0);
    r.D_max = static_cast<int>(std::ceil(std::log(std::max(p.F / p.Delta, 2.0)) / std::log(shrink))) + 1;
  }
  return r;
}
}  // namespace

double get_empirical_1_energy(const SignalSource& z, const OneClusterParams& p, RngStream& rng) {
  const ResolvedParams r = resolve(p);
  double acc = 0.0;
  for (int i = 0; i < r.R_est; ++i) acc += std::norm(z.sample(rng.uniform(0.0, p.T)));
  return std::sqrt(acc / r.R_est);
}

LegalSample get_legal_1_sample(const SignalSource& z, const OneClusterParams& p, double beta, double z_emp,
                               RngStream& rng) {
  const ResolvedParams r = resolve(p);
  if (!(beta > 0) || beta > 2.0 * p.beta_cap() * (1.0 + 1e-9))
    throw ConfigError("get_legal_1_sample: beta outside (0, 2*beta_cap]");

  // weighted reservoir over the heavy draws
  double total_w = 0.0;
  LegalSample pick;
  bool have = false;
  for (int i = 0; i < r.R_repeats; ++i) {
    const double alpha = rng.uniform(0.0, p.T);
    const cplx z0 = z.sample(alpha);
    if (!(std::abs(z0) >= 0.5 * z_emp) || z_emp <= 0.0) continue;
    const cplx z1 = z.sample(alpha + beta);
    const double w = std::norm(z0) + std::norm(z1);
    if (w <= 0.0) continue;
    total_w += w;
    if (rng.uniform() * total_w <= w) {
      pick = {alpha, z0, z1};
      have = true;
    }
  }
  if (!have) throw EnergyTooLowError("get_legal_1_sample: no sample cleared the heavy threshold");
  return pick;
}

void vote_phase_candidates(double phi, double tau, double lo, double w, int t_regions, std::vector<int>& votes) {
  const double hi = lo + t_regions * w;
  const double base = phi / kTwoPi;  // candidate freqs are (base + n)/tau
  const long long n_lo = static_cast<long long>(std::floor(tau * (lo - w) - base));
  const long long n_hi = static_cast<long long>(std::ceil(tau * (hi + w) - base));
  int prev_from = t_regions + 1, prev_to = -1;
  for (long long n = n_lo; n <= n_hi; ++n) {
    const double theta = (base + n) / tau;
    if (theta < lo - w || theta > hi + w) continue;
    const int q = static_cast<int>(std::floor((theta - lo) / w));
    const int from = std::max(0, q - 1), to = std::min(t_regions - 1, q + 1);
    for (int j = from; j <= to; ++j) {
      if (j >= prev_from && j <= prev_to) continue;  // one vote per region per observation
      ++votes[j];
    }
    prev_from = from;
    prev_to = to;
  }
}

namespace {

// One multi-scale voting search; `observe(beta)` returns the legal pair used
// for this vote. Shared by the 1-cluster path and (with per-bin observers)
// mirrored in the k-cluster path.
template <typename Observe>
double locate_core(const OneClusterParams& p, const ResolvedParams& r, Observe&& observe, RngStream& rng) {
  double lo = -p.F, hi = p.F;
  const double tau_cap = std::min(p.beta_cap(), 0.4 * p.T);
  const double psi = std::numbers::pi / 2.0;  // target phase per region width
  bool have_result = false;
  double result = 0.0;

  std::vector<int> votes(r.t_regions);
  for (int round = 0; round < r.D_max; ++round) {
    const double w = (hi - lo) / r.t_regions;
    const double tau_sched = psi / (kTwoPi * w);
    if (tau_sched > tau_cap && round > 0) break;
    const double tau_hat = std::min(tau_sched, tau_cap);

    std::fill(votes.begin(), votes.end(), 0);
    for (int v = 0; v < p.R_loc; ++v) {
      const double beta = rng.uniform(tau_hat / 2.0, tau_hat);
      const LegalSample s = observe(beta);
      if (std::abs(s.z0) == 0.0) continue;
      const double phi = std::arg(s.z1 / s.z0);
      vote_phase_candidates(phi, beta, lo, w, r.t_regions, votes);
    }

    int best = -1;
    for (int q = 0; q < r.t_regions; ++q)
      if (votes[q] > p.R_loc * p.c_vote && (best < 0 || votes[q] > votes[best])) best = q;
    if (best < 0) {
      if (!have_result) throw LocationFailedError("locate: no region reached a majority");
      break;
    }
    double center = lo + (best + 0.5) * w;
    center = std::clamp(center, -p.F, p.F);
    result = center;
    have_result = true;
    lo = center - 2.0 * w;
    hi = center + 2.0 * w;
  }
  if (!have_result) throw LocationFailedError("locate: search made no progress");
  return result;
}

}  // namespace

double locate_1_signal(const SignalSource& z, const OneClusterParams& p, double z_emp, RngStream& rng) {
  const ResolvedParams r = resolve(p);
  return locate_core(
      p, r, [&](double beta) { return get_legal_1_sample(z, p, beta, z_emp, rng); }, rng);
}

double frequency_recovery_1cluster(const SignalSource& z, const OneClusterParams& p, RngStream& rng) {
  const int R = std::max(1, p.R_median);
  RngStream energy_rng = rng.fork(0);
  const double z_emp = get_empirical_1_energy(z, p, energy_rng);
  std::vector<double> results;
  int failures = 0;
  for (int i = 0; i < R; ++i) {
    RngStream s = rng.fork(i + 1);
    try {
      results.push_back(locate_1_signal(z, p, z_emp, s));
    } catch (const LocationFailedError&) {
      ++failures;
    } catch (const EnergyTooLowError&) {
      ++failures;
    }
  }
  if (failures * 2 > R || results.empty())
    throw LocationFailedError("frequency_recovery_1cluster: majority of locate runs failed");
  return median_of(std::move(results));
}

OneClusterResult cft_1cluster(const SignalSource& x, const FilterH& h, const OneClusterParams& p, RngStream& rng) {
  const std::uint64_t count0 = x.samples_taken();
  const SignalSource z = windowed(x, h);
  RngStream freq_rng = rng.fork(1);
  const double f_tilde = frequency_recovery_1cluster(z, p, freq_rng);

  const SignalSource demod(
      [x, f_tilde](double t) {
        const double ph = -kTwoPi * f_tilde * t;
        return x.sample(t) * cplx{std::cos(ph), std::sin(ph)};
      },
      x.label() + "|demod");

  RngStream fit_rng = rng.fork(2);
  const Polynomial poly = robust_poly_learn_boosted(demod, p.degree_cap, p.T, p.boost_fail_prob, fit_rng);

  OneClusterResult res;
  res.f_tilde = f_tilde;
  res.model = MixedBasisModel({{f_tilde, poly}});
  res.n_samples = x.samples_taken() - count0;

  RngStream diag_rng = rng.fork(3);
  double acc = 0.0;
  const int ndiag = 256;
  for (int i = 0; i < ndiag; ++i) {
    const double t = diag_rng.uniform(0.0, p.T);
    acc += std::norm(res.model.eval(t) - x.peek(t));
  }
  res.residual_rms = std::sqrt(acc / ndiag);
  return res;
}

}  // namespace sparsetone
