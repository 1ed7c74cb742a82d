// One-periodic background potential given by a finite Fourier series.
#pragma once

#include <string>
#include <vector>

#include "bandgap/common.hpp"

namespace bandgap {

// Q(x) = sum_{|n| <= N} qhat_n e^{2 pi i n x}, period 1, real-valued
// (qhat_{-n} = conj(qhat_n) is enforced on construction).
class PeriodicPotential {
 public:
  PeriodicPotential() = default;  // Q == 0

  // coeffs[j] corresponds to mode n = j - N with coeffs.size() == 2N+1.
  explicit PeriodicPotential(std::vector<cplx> coeffs);

  // Parse {"fourier": [[n, re, im], ...]}. Modes may be given for n >= 0
  // only; missing negative modes are filled by conjugation.
  static PeriodicPotential from_json(const std::string& json_text);

  int max_mode() const { return n_max_; }
  cplx coeff(int n) const;          // qhat_n, zero outside |n| <= max_mode
  double operator()(double x) const;  // pointwise evaluation
  double sup_norm() const;            // sampled sup of |Q|
  bool is_zero() const { return n_max_ == 0 && coeffs_.size() == 1 && coeffs_[0] == cplx{}; }

 private:
  int n_max_ = 0;
  std::vector<cplx> coeffs_{cplx{}};
};

}  // namespace bandgap
