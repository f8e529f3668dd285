#include "sparsetone/k_cluster.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "sparsetone/errors.hpp"
#include "sparsetone/polynomial.hpp"

namespace sparsetone {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

void RecoveryConfig::validate() const {
  if (!(T > 0) || !(F > 0)) throw ConfigError("RecoveryConfig: T, F must be positive");
  if (k < 1) throw ConfigError("RecoveryConfig: k >= 1 required");
  if (!(delta > 0 && delta < 1)) throw ConfigError("RecoveryConfig: delta in (0,1) required");
  if (Delta < 0 || Delta_h < 0) throw ConfigError("RecoveryConfig: Delta, Delta_h must be >= 0");
  if (B != 0 && B < 2) throw ConfigError("RecoveryConfig: B >= 2 required");
  if (!(alpha > 0 && alpha < 1)) throw ConfigError("RecoveryConfig: alpha in (0,1) required");
  if (r_loc < 1 || degree_cap < 1 || m_cap < 1) throw ConfigError("RecoveryConfig: counts must be >= 1");
}

RecoveryConfig RecoveryConfig::normalized() const {
  validate();
  RecoveryConfig c = *this;
  if (c.B == 0) c.B = next_pow2(std::max(4, 2 * c.k));
  if (!is_pow2(c.B)) c.B = next_pow2(c.B);
  if (c.Delta == 0.0) c.Delta = std::max(1.0, c.c_delta * c.k * c.k) / c.T;
  if (c.stage_runs == 0) c.stage_runs = 2 * c.k + 5;
  if (c.boost_runs == 0) c.boost_runs = 2 * c.k + 5;
  if (c.list_cap == 0) c.list_cap = 4 * c.k;
  return c;
}

OneClusterParams k_locate_params(const RecoveryConfig& cfg) {
  OneClusterParams p = OneClusterParams::defaults(cfg.T, cfg.F, cfg.Delta, cfg.k);
  p.R_loc = cfg.r_loc;
  p.repeat_scale = cfg.repeat_scale;
  p.c_beta = cfg.c_beta;
  p.t_regions = cfg.t_regions;
  return p;
}

namespace {
struct KResolved {
  int R_est, R_repeats, t_regions, D_max;
};

KResolved k_resolve(const OneClusterParams& p) {
  // reuse the one-cluster derivations
  KResolved r;
  OneClusterParams q = p;
  q.validate();
  const double td = std::max(p.T * p.Delta, 1e-9);
  auto clamp_count = [](double v) { return std::min(1000000, std::max(8, (int)std::ceil(v))); };
  r.R_est = p.R_est > 0 ? p.R_est : clamp_count(p.repeat_scale * td * td);
  r.R_repeats = p.R_repeats > 0 ? p.R_repeats : clamp_count(p.repeat_scale * td * td * td);
  r.t_regions = p.t_regions > 0
                    ? p.t_regions
                    : std::clamp(4 * (int)std::ceil(std::log2(std::max(p.F * p.T, 2.0))), 16, 128);
  const double shrink = std::max(r.t_regions / 4.0, 2.0);
  r.D_max = p.D_max > 0 ? p.D_max
                        : (int)std::ceil(std::log(std::max(p.F / p.Delta, 2.0)) / std::log(shrink)) + 1;
  return r;
}
}  // namespace

std::vector<double> get_empirical_k_energy(const SignalSource& windowed_x, const FilterG& g, const HashConfig& base,
                                           const OneClusterParams& p, RngStream& rng) {
  const KResolved r = k_resolve(p);
  std::vector<double> acc(base.B, 0.0);
  for (int i = 0; i < r.R_est; ++i) {
    HashConfig cfg = base;
    cfg.a = rng.uniform(0.0, p.T / base.sigma);
    const std::vector<cplx> u = hash_to_bins(windowed_x, g, cfg);
    for (int j = 0; j < base.B; ++j) acc[j] += std::norm(u[j]);
  }
  for (double& v : acc) v = std::sqrt(v / r.R_est);
  return acc;
}

KLegalSample get_legal_k_sample(const SignalSource& windowed_x, const FilterG& g, const HashConfig& base,
                                const OneClusterParams& p, double tau, const std::vector<double>& z_emp,
                                RngStream& rng) {
  const KResolved r = k_resolve(p);
  const int B = base.B;
  KLegalSample out;
  out.v0.assign(B, cplx{0, 0});
  out.v1.assign(B, cplx{0, 0});
  out.active.assign(B, 0);
  std::vector<double> total_w(B, 0.0);

  for (int i = 0; i < r.R_repeats; ++i) {
    HashConfig cfg = base;
    cfg.a = rng.uniform(0.0, p.T / base.sigma);
    const std::vector<cplx> u0 = hash_to_bins(windowed_x, g, cfg);
    cfg.a += tau / base.sigma;
    const std::vector<cplx> u1 = hash_to_bins(windowed_x, g, cfg);
    for (int j = 0; j < B; ++j) {
      if (z_emp[j] <= 0.0 || std::abs(u0[j]) < 0.5 * z_emp[j]) continue;
      const double w = std::norm(u0[j]) + std::norm(u1[j]);
      if (w <= 0.0) continue;
      total_w[j] += w;
      if (rng.uniform() * total_w[j] <= w) {
        out.v0[j] = u0[j];
        out.v1[j] = u1[j];
        out.active[j] = 1;
      }
    }
  }
  return out;
}

FrequencyList one_stage(const SignalSource& windowed_x, const FilterG& g, const HashConfig& base,
                        const OneClusterParams& p, double bin_floor, RngStream& rng) {
  const KResolved r = k_resolve(p);
  const int B = base.B;
  RngStream energy_rng = rng.fork(0);
  const std::vector<double> z_emp = get_empirical_k_energy(windowed_x, g, base, p, energy_rng);
  const double z_max = *std::max_element(z_emp.begin(), z_emp.end());

  std::vector<char> alive(B, 0);
  std::vector<char> won(B, 0);
  std::vector<double> lo(B, -p.F), result(B, 0.0);
  int n_alive = 0;
  for (int j = 0; j < B; ++j)
    if (z_emp[j] > 0.0 && z_emp[j] >= bin_floor * z_max) {
      alive[j] = 1;
      ++n_alive;
    }

  double L = 2.0 * p.F;
  const double tau_cap = std::min(p.beta_cap(), 0.4 * p.T);
  const double psi = std::numbers::pi / 2.0;
  RngStream vote_rng = rng.fork(1);
  std::vector<std::vector<int>> votes(B, std::vector<int>(r.t_regions));

  for (int round = 0; round < r.D_max && n_alive > 0; ++round) {
    const double w = L / r.t_regions;
    const double tau_sched = psi / (kTwoPi * w);
    if (tau_sched > tau_cap && round > 0) break;
    const double tau_hat = std::min(tau_sched, tau_cap);

    for (int j = 0; j < B; ++j) std::fill(votes[j].begin(), votes[j].end(), 0);
    for (int v = 0; v < p.R_loc; ++v) {
      const double beta = vote_rng.uniform(tau_hat / 2.0, tau_hat);
      const KLegalSample s = get_legal_k_sample(windowed_x, g, base, p, beta, z_emp, vote_rng);
      for (int j = 0; j < B; ++j) {
        if (!alive[j] || !s.active[j] || std::abs(s.v0[j]) == 0.0) continue;
        const double phi = std::arg(s.v1[j] / s.v0[j]);
        vote_phase_candidates(phi, beta, lo[j], w, r.t_regions, votes[j]);
      }
    }

    for (int j = 0; j < B; ++j) {
      if (!alive[j]) continue;
      int best = -1;
      for (int q = 0; q < r.t_regions; ++q)
        if (votes[j][q] > p.R_loc * p.c_vote && (best < 0 || votes[j][q] > votes[j][best])) best = q;
      if (best < 0) {
        alive[j] = 0;
        --n_alive;
        continue;
      }
      double center = std::clamp(lo[j] + (best + 0.5) * w, -p.F, p.F);
      result[j] = center;
      won[j] = 1;
      lo[j] = center - 2.0 * w;
    }
    L = 4.0 * w;
  }

  FrequencyList out;
  for (int j = 0; j < B; ++j)
    if (won[j]) out.freqs.push_back(result[j]);
  std::sort(out.freqs.begin(), out.freqs.end());
  return out;
}

FrequencyList merged_stages(const std::vector<FrequencyList>& lists) {
  const int R = static_cast<int>(lists.size());
  if (R == 0) return {};
  std::vector<double> all;
  for (const FrequencyList& l : lists) all.insert(all.end(), l.freqs.begin(), l.freqs.end());
  std::sort(all.begin(), all.end());
  const int stride = (R + 1) / 2;
  FrequencyList out;
  for (int i = stride - 1; i < static_cast<int>(all.size()); i += stride) out.freqs.push_back(all[i]);
  return out;
}

FrequencyList frequency_recovery_k_cluster(const SignalSource& x, const FilterH& h, const FilterG& g,
                                           const RecoveryConfig& cfg_in, RngStream& rng) {
  const RecoveryConfig cfg = cfg_in.normalized();
  const double delta_h = cfg.Delta_h > 0 ? cfg.Delta_h : h.delta_h;
  const SignalSource z = windowed(x, h);
  const OneClusterParams p = k_locate_params(cfg);

  std::vector<FrequencyList> lists;
  for (int rstage = 0; rstage < cfg.stage_runs; ++rstage) {
    RngStream s = rng.fork(rstage + 1);
    HashConfig base;
    base.B = cfg.B;
    base.D = g.D;
    base.sigma = s.uniform(1.0 / (cfg.B * delta_h), 2.0 / (cfg.B * delta_h));
    base.b = s.uniform() / base.sigma;  // one full hash period
    lists.push_back(one_stage(z, g, base, p, cfg.bin_floor, s));
  }
  FrequencyList merged = merged_stages(lists);
  if (static_cast<int>(merged.freqs.size()) > cfg.list_cap) {
    // keep an evenly strided subset
    FrequencyList capped;
    const double step = double(merged.freqs.size()) / cfg.list_cap;
    for (int i = 0; i < cfg.list_cap; ++i) capped.freqs.push_back(merged.freqs[(size_t)(i * step)]);
    merged = std::move(capped);
  }
  return merged;
}

namespace {

std::vector<double> dedup_freqs(const std::vector<double>& freqs, double tol) {
  std::vector<double> sorted = freqs;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  size_t i = 0;
  while (i < sorted.size()) {
    size_t j = i + 1;
    double sum = sorted[i];
    while (j < sorted.size() && sorted[j] - sorted[j - 1] <= tol) sum += sorted[j++];
    out.push_back(sum / double(j - i));  // merge the group by its mean
    i = j;
  }
  return out;
}

struct MixedDesign {
  std::vector<double> freqs;
  int degree = 0;
  int dim() const { return static_cast<int>(freqs.size()) * (degree + 1); }
};

void mixed_row(const MixedDesign& d, double T, double t, cplx* row) {
  const double tau = (2.0 * t - T) / T;
  const int l = static_cast<int>(d.freqs.size());
  for (int i2 = 0; i2 < l; ++i2) {
    const double ph = kTwoPi * d.freqs[i2] * t;
    cplx e{std::cos(ph), std::sin(ph)};
    for (int i1 = 0; i1 <= d.degree; ++i1) {
      row[i1 * l + i2] = e;
      e *= tau;
    }
  }
}

int sample_budget(const RecoveryConfig& cfg, int dim) {
  const double quad = cfg.c_m * double(dim) * double(dim) * std::log(std::max(dim, 3));
  return std::max({cfg.m_floor, 3 * dim, std::min((int)quad, cfg.m_cap)});
}

MixedBasisModel model_from_coeffs(const MixedDesign& d, double T, const Eigen::VectorXcd& alpha) {
  const int l = static_cast<int>(d.freqs.size());
  std::vector<MixedTerm> terms;
  terms.reserve(l);
  for (int i2 = 0; i2 < l; ++i2) {
    std::vector<cplx> coeffs(d.degree + 1);
    for (int i1 = 0; i1 <= d.degree; ++i1) coeffs[i1] = alpha(i1 * l + i2);
    terms.push_back({d.freqs[i2], Polynomial(std::move(coeffs), 0.0, T)});
  }
  return MixedBasisModel(std::move(terms));
}

MixedDesign make_design(const FrequencyList& freqs, const RecoveryConfig& cfg) {
  if (freqs.freqs.empty()) throw ConfigError("signal_recovery_k_cluster: empty frequency list");
  MixedDesign d;
  d.degree = cfg.degree_cap;
  d.freqs = dedup_freqs(freqs.freqs, 1.0 / (double(std::max(1, cfg.degree_cap)) * cfg.T));
  return d;
}

}  // namespace

MixedBasisModel signal_recovery_k_cluster(const SignalSource& x, const FrequencyList& freqs,
                                          const RecoveryConfig& cfg_in, RngStream& rng) {
  const RecoveryConfig cfg = cfg_in.normalized();
  const MixedDesign d = make_design(freqs, cfg);
  const int dim = d.dim();
  const int m = sample_budget(cfg, dim);

  Eigen::MatrixXcd A(m, dim);
  Eigen::VectorXcd b(m);
  std::vector<cplx> row(dim);
  for (int i = 0; i < m; ++i) {
    const double t = rng.uniform(0.0, cfg.T);
    mixed_row(d, cfg.T, t, row.data());
    for (int j = 0; j < dim; ++j) A(i, j) = row[j];
    b(i) = x.sample(t);
  }
  const Eigen::VectorXcd alpha = weighted_least_squares(A, b, Eigen::VectorXd::Ones(m));
  return model_from_coeffs(d, cfg.T, alpha);
}

MixedBasisModel signal_recovery_k_cluster_boosted(const SignalSource& x, const FrequencyList& freqs,
                                                  const RecoveryConfig& cfg_in, RngStream& rng) {
  const RecoveryConfig cfg = cfg_in.normalized();
  const int R = cfg.boost_runs;
  std::vector<MixedBasisModel> fits;
  fits.reserve(R);
  for (int r = 0; r < R; ++r) {
    RngStream s = rng.fork(r + 1);
    fits.push_back(signal_recovery_k_cluster(x, freqs, cfg, s));
  }
  if (R == 1) return fits[0];

  const MixedDesign d = make_design(freqs, cfg);
  const int dim = d.dim();
  const int m = sample_budget(cfg, dim);
  RngStream s = rng.fork(0);

  Eigen::MatrixXcd A(m, dim);
  Eigen::VectorXcd b(m);
  std::vector<cplx> row(dim);
  std::vector<double> re(R), im(R);
  for (int i = 0; i < m; ++i) {
    const double t = s.uniform(0.0, cfg.T);
    mixed_row(d, cfg.T, t, row.data());
    for (int j = 0; j < dim; ++j) A(i, j) = row[j];
    for (int r = 0; r < R; ++r) {
      const cplx v = fits[r].eval(t);
      re[r] = v.real();
      im[r] = v.imag();
    }
    auto med = [](std::vector<double>& v) {
      const size_t mid = v.size() / 2;
      std::nth_element(v.begin(), v.begin() + mid, v.end());
      const double hi = v[mid];
      if (v.size() % 2 == 0) return (*std::max_element(v.begin(), v.begin() + mid) + hi) / 2.0;
      return hi;
    };
    b(i) = cplx{med(re), med(im)};
  }
  const Eigen::VectorXcd alpha = weighted_least_squares(A, b, Eigen::VectorXd::Ones(m));
  return model_from_coeffs(d, cfg.T, alpha);
}

RecoveryReport cft_k_cluster(const SignalSource& x, const RecoveryConfig& cfg_in, RngStream& rng,
                             const FourierSparseSignal* truth) {
  const RecoveryConfig cfg = cfg_in.normalized();
  const FilterH h = FilterH::build(cfg.k, cfg.delta, cfg.T, cfg.h_knobs);
  GKnobs gk = cfg.g_knobs;
  const FilterG g = FilterG::build(cfg.B, cfg.delta, cfg.alpha, gk);

  const std::uint64_t count0 = x.samples_taken();
  RngStream freq_rng = rng.fork(1);
  const FrequencyList freqs = frequency_recovery_k_cluster(x, h, g, cfg, freq_rng);

  RngStream fit_rng = rng.fork(2);
  MixedBasisModel model = signal_recovery_k_cluster_boosted(x, freqs, cfg, fit_rng);

  RecoveryReport rep;
  rep.model = std::move(model);
  rep.n_samples = x.samples_taken() - count0;
  rep.seed = cfg.seed;

  // diagnostics use peek: they do not charge the sample counter
  RngStream diag_rng = rng.fork(3);
  double acc = 0.0;
  const int ndiag = 512;
  for (int i = 0; i < ndiag; ++i) {
    const double t = diag_rng.uniform(0.0, cfg.T);
    acc += std::norm(rep.model.eval(t) - x.peek(t));
  }
  rep.noise_level = std::sqrt(acc / ndiag);

  if (truth) {
    rep.err_T = rms_on_interval([&](double t) { return rep.model.eval(t) - truth->eval(t); }, 0.0, cfg.T);
  }
  return rep;
}

}  // namespace sparsetone
