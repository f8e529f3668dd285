#include "sparsetone/signal.hpp"

#include <algorithm>
#include <cmath>

#include "sparsetone/errors.hpp"

namespace sparsetone {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

FourierSparseSignal::FourierSparseSignal(std::vector<Tone> tones) {
  if (tones.empty()) throw ConfigError("FourierSparseSignal needs k >= 1 tones");
  std::sort(tones.begin(), tones.end(), [](const Tone& a, const Tone& b) { return a.freq < b.freq; });
  for (const Tone& t : tones) {
    if (!std::isfinite(t.freq) || !std::isfinite(t.amp.real()) || !std::isfinite(t.amp.imag()))
      throw ConfigError("non-finite tone");
    if (!tones_.empty() && tones_.back().freq == t.freq)
      tones_.back().amp += t.amp;  // merge duplicates
    else
      tones_.push_back(t);
  }
}

cplx FourierSparseSignal::eval(double t) const {
  cplx acc{0.0, 0.0};
  for (const Tone& tn : tones_) {
    const double ph = kTwoPi * tn.freq * t;
    acc += tn.amp * cplx{std::cos(ph), std::sin(ph)};
  }
  return acc;
}

FourierSparseSignal gen_signal(const SignalGenSpec& spec, RngStream& rng) {
  if (spec.k < 1) throw ConfigError("gen_signal: k >= 1 required");
  if (spec.min_gap > 0 && spec.k * spec.min_gap > 2.0 * spec.freq_limit)
    throw ConfigError("gen_signal: k*min_gap exceeds the band width");

  std::vector<double> freqs;
  if (!spec.cluster_layout.empty()) {
    for (const ClusterLayout& c : spec.cluster_layout)
      for (int i = 0; i < c.tones; ++i) freqs.push_back(c.center + (rng.uniform() - 0.5) * c.width);
  } else {
    const int max_tries = 20000;
    int tries = 0;
    while (static_cast<int>(freqs.size()) < spec.k) {
      const double f = rng.uniform(-spec.freq_limit, spec.freq_limit);
      bool ok = true;
      if (spec.min_gap > 0)
        for (double g : freqs)
          if (std::abs(g - f) < spec.min_gap) {
            ok = false;
            break;
          }
      if (ok) freqs.push_back(f);
      if (++tries > max_tries) throw ConfigError("gen_signal: min_gap rejection did not converge");
    }
  }

  std::vector<Tone> tones;
  tones.reserve(freqs.size());
  for (double f : freqs) {
    double mag = 1.0;
    if (spec.amplitude_law == AmplitudeLaw::LogUniform) mag = std::pow(10.0, rng.uniform(-1.0, 1.0));
    const double ph = rng.uniform(0.0, kTwoPi);
    tones.push_back({f, mag * cplx{std::cos(ph), std::sin(ph)}});
  }
  return FourierSparseSignal(std::move(tones));
}

SignalSource with_noise(const SignalSource& clean, const NoiseSpec& spec, double T, RngStream& rng) {
  switch (spec.kind) {
    case NoiseKind::None:
      return clean;
    case NoiseKind::GaussianWhite: {
      if (spec.level == 0.0) return clean;
      const std::uint64_t seed = rng.next_u64();
      const double comp_sigma = spec.level / std::sqrt(2.0);
      return SignalSource(
          [clean, seed, comp_sigma](double t) {
            double g0, g1;
            gaussian_pair_at(seed, t, g0, g1);
            return clean.peek(t) + comp_sigma * cplx{g0, g1};
          },
          clean.label() + "+gw");
    }
    case NoiseKind::AdversarialSparse: {
      if (spec.level == 0.0) return clean;
      // a handful of narrow gaussian bumps with random complex weights
      const int bumps = 5;
      struct Bump {
        double c, w;
        cplx a;
      };
      auto bs = std::make_shared<std::vector<Bump>>();
      for (int i = 0; i < bumps; ++i) {
        const double ph = rng.uniform(0.0, kTwoPi);
        bs->push_back({rng.uniform(0.02 * T, 0.98 * T), 0.01 * T * (0.5 + rng.uniform()),
                       cplx{std::cos(ph), std::sin(ph)} * (0.5 + rng.uniform())});
      }
      auto raw = [bs](double t) {
        cplx acc{0.0, 0.0};
        for (const Bump& b : *bs) {
          const double u = (t - b.c) / b.w;
          acc += b.a * std::exp(-0.5 * u * u);
        }
        return acc;
      };
      const double realized = norm_T(raw, T);
      const double scale = realized > 0 ? spec.level / realized : 0.0;
      return SignalSource([clean, raw, scale](double t) { return clean.peek(t) + scale * raw(t); },
                          clean.label() + "+adv");
    }
    case NoiseKind::Custom: {
      auto g = spec.custom;
      if (!g) throw ConfigError("with_noise: custom noise callable missing");
      return SignalSource([clean, g](double t) { return clean.peek(t) + g(t); }, clean.label() + "+custom");
    }
  }
  throw ConfigError("with_noise: unknown kind");
}

double norm_T(const std::function<cplx(double)>& y, double T, const QuadratureSpec& quad) {
  if (T <= 0) throw ConfigError("norm_T: T > 0 required");
  if (quad.points < 2) throw ConfigError("norm_T: quadrature grid too small");
  return rms_on_interval(y, 0.0, T, quad);
}

double norm_T(const SignalSource& src, double T, const QuadratureSpec& quad) {
  return norm_T([&src](double t) { return src.sample(t); }, T, quad);
}

Eigen::MatrixXcd gram_matrix(const std::vector<double>& freqs, double T) {
  const int k = static_cast<int>(freqs.size());
  if (k < 1) throw ConfigError("gram_matrix: k >= 1 required");
  Eigen::MatrixXcd G(k, k);
  for (int i = 0; i < k; ++i) {
    G(i, i) = 1.0;
    for (int j = 0; j < i; ++j) {
      const double d = freqs[i] - freqs[j];
      cplx v;
      if (d == 0.0) {
        v = 1.0;
      } else {
        const double w = kTwoPi * d * T;
        // (e^{iw} - 1) / (iw)
        v = (cplx{std::cos(w), std::sin(w)} - 1.0) / cplx{0.0, w};
      }
      G(i, j) = v;
      G(j, i) = std::conj(v);
    }
  }
  return G;
}

std::vector<SpectrumPoint> dense_spectrum_oracle(const std::function<cplx(double)>& src, double t_lo, double t_hi,
                                                 const std::vector<double>& fgrid, int time_points) {
  if (fgrid.empty()) return {};
  int n = time_points;
  if (n % 2) ++n;
  const double h = (t_hi - t_lo) / n;
  std::vector<cplx> vals(n + 1);
  for (int i = 0; i <= n; ++i) {
    vals[i] = src(t_lo + h * i);
    if (!std::isfinite(vals[i].real()) || !std::isfinite(vals[i].imag()))
      throw NumericalError("dense_spectrum_oracle: non-finite sample");
  }
  std::vector<SpectrumPoint> out;
  out.reserve(fgrid.size());
  for (double f : fgrid) {
    cplx acc{0.0, 0.0};
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 1.0 : ((i % 2) ? 4.0 : 2.0);
      const double ph = -kTwoPi * f * (t_lo + h * i);
      acc += w * vals[i] * cplx{std::cos(ph), std::sin(ph)};
    }
    acc *= h / 3.0;
    out.push_back({f, std::norm(acc)});
  }
  return out;
}

}  // namespace sparsetone
