#pragma once

#include <cstdint>
#include <vector>

#include "sparsetone/polynomial.hpp"

namespace sparsetone {

struct MixedTerm {
  double freq = 0.0;  // Hz
  Polynomial poly;
};

// Recovered hypothesis sum_i e^{2 pi i f_i t} P_i(t).
class MixedBasisModel {
 public:
  MixedBasisModel() = default;
  explicit MixedBasisModel(std::vector<MixedTerm> terms) : terms_(std::move(terms)) {}

  cplx eval(double t) const {
    cplx acc{0.0, 0.0};
    for (const MixedTerm& mt : terms_) {
      const double ph = 2.0 * std::numbers::pi * mt.freq * t;
      acc += cplx{std::cos(ph), std::sin(ph)} * mt.poly.eval(t);
    }
    return acc;
  }

  const std::vector<MixedTerm>& terms() const { return terms_; }
  int degree() const {
    int d = 0;
    for (const auto& mt : terms_) d = std::max(d, mt.poly.degree());
    return d;
  }

 private:
  std::vector<MixedTerm> terms_;
};

struct RecoveryReport {
  MixedBasisModel model;
  std::uint64_t n_samples = 0;
  double err_T = -1.0;  // vs truth when known, else -1
  double noise_level = 0.0;
  std::uint64_t seed = 0;
  double wall_time_ms = 0.0;
};

}  // namespace sparsetone
