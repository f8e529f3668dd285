#pragma once

#include <atomic>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sparsetone/quadrature.hpp"
#include "sparsetone/rng.hpp"

namespace sparsetone {

using cplx = std::complex<double>;

struct Tone {
  double freq = 0.0;  // Hz
  cplx amp{0.0, 0.0};
};

// Exact ground-truth signal: sum of k complex exponentials v_j e^{2 pi i f_j t}.
// Duplicate frequencies are merged on construction.
class FourierSparseSignal {
 public:
  FourierSparseSignal() = default;
  explicit FourierSparseSignal(std::vector<Tone> tones);
  FourierSparseSignal(std::initializer_list<Tone> tones)
      : FourierSparseSignal(std::vector<Tone>(tones)) {}

  cplx eval(double t) const;
  int k() const { return static_cast<int>(tones_.size()); }
  const std::vector<Tone>& tones() const { return tones_; }

 private:
  std::vector<Tone> tones_;
};

inline cplx eval_sparse(const FourierSparseSignal& sig, double t) { return sig.eval(t); }

// Opaque sampling oracle t -> C with a monotone sample counter. Copies share
// the counter, so wrapped/derived sources keep accounting against the root.
class SignalSource {
 public:
  using Fn = std::function<cplx(double)>;

  SignalSource() : SignalSource([](double) { return cplx{0.0, 0.0}; }, "zero") {}
  SignalSource(Fn fn, std::string label)
      : fn_(std::move(fn)), label_(std::move(label)), count_(std::make_shared<std::atomic<std::uint64_t>>(0)) {}

  cplx sample(double t) const {
    count_->fetch_add(1, std::memory_order_relaxed);
    return fn_(t);
  }

  // Evaluate without charging the sample counter (tests and oracles only).
  cplx peek(double t) const { return fn_(t); }

  std::uint64_t samples_taken() const { return count_->load(std::memory_order_relaxed); }
  const std::string& label() const { return label_; }

 private:
  Fn fn_;
  std::string label_;
  std::shared_ptr<std::atomic<std::uint64_t>> count_;
};

inline SignalSource make_source(const FourierSparseSignal& sig, std::string label = "sparse") {
  return SignalSource([sig](double t) { return sig.eval(t); }, std::move(label));
}

struct ClusterLayout {
  double center = 0.0;  // Hz
  double width = 0.0;   // Hz, tones land in [center-width/2, center+width/2]
  int tones = 1;
};

enum class AmplitudeLaw { Unit, LogUniform };

struct SignalGenSpec {
  int k = 1;
  double freq_limit = 100.0;  // tones drawn from [-freq_limit, freq_limit]
  double min_gap = 0.0;       // eta; 0 disables the rejection step
  AmplitudeLaw amplitude_law = AmplitudeLaw::Unit;
  std::vector<ClusterLayout> cluster_layout;  // optional
};

enum class NoiseKind { None, GaussianWhite, AdversarialSparse, Custom };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::None;
  double level = 0.0;  // target ||g||_T
  std::function<cplx(double)> custom;
};

FourierSparseSignal gen_signal(const SignalGenSpec& spec, RngStream& rng);

// x -> x + g with realized ||g||_T calibrated to spec.level on the default grid.
SignalSource with_noise(const SignalSource& clean, const NoiseSpec& spec, double T, RngStream& rng);

// RMS of a source over [0,T] (composite Simpson; does not charge the counter
// when given a closed form; the SignalSource overload charges it per call).
double norm_T(const std::function<cplx(double)>& y, double T, const QuadratureSpec& quad = {});
double norm_T(const SignalSource& src, double T, const QuadratureSpec& quad = {});

// Closed-form Gram matrix of {e^{2 pi i f_j t}} under <.,.>_T. Hermitian; the
// coincident-frequency limit gives entry 1.
Eigen::MatrixXcd gram_matrix(const std::vector<double>& freqs, double T);

struct SpectrumPoint {
  double freq = 0.0;
  double power = 0.0;  // |X(f)|^2
};

// Brute-force continuous Fourier transform of src (optionally pre-windowed by
// the caller) on a frequency grid, by time quadrature over [t_lo, t_hi].
// Test/bench oracle only.
std::vector<SpectrumPoint> dense_spectrum_oracle(const std::function<cplx(double)>& src, double t_lo, double t_hi,
                                                 const std::vector<double>& fgrid, int time_points = 1 << 15);

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * (n == 1 ? 0.0 : double(i) / (n - 1));
  return v;
}

}  // namespace sparsetone
