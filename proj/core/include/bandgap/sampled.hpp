// Uniformly sampled functions on a finite interval with spectral helpers.
#pragma once

#include <functional>
#include <vector>

#include "bandgap/common.hpp"

namespace bandgap {

// Samples v[i] at x_i = x0 + i*dx, i = 0..n-1.
struct SampledFunction {
  double x0 = 0.0;
  double dx = 0.0;
  std::vector<cplx> values;

  std::size_t size() const { return values.size(); }
  double x_at(std::size_t i) const { return x0 + dx * static_cast<double>(i); }
  double x_end() const { return x_at(size() - 1); }

  static SampledFunction sample(const std::function<cplx(double)>& f, double half_width,
                                double step);

  // Semidiscrete Fourier transform dx * sum_j v_j e^{-2 pi i x_j xi};
  // spectrally accurate for functions decaying inside the window.
  cplx fourier_at(double xi) const;

  double max_abs() const;
  double boundary_abs() const;  // max |v| at the two window ends
  double max_imag() const;
  double l2_norm() const;       // trapezoid estimate of ||f||_{L2}

  SampledFunction& operator+=(const SampledFunction& o);
  SampledFunction& operator*=(double s);
};

// In-place-style DFT helpers built on FFTW (complex, unnormalized forward
// transform sum_j v_j e^{-2 pi i j m / N}).
std::vector<cplx> dft_forward(const std::vector<cplx>& v);
std::vector<cplx> dft_inverse(const std::vector<cplx>& v);  // includes 1/N

// Frequency of DFT bin m for n samples with spacing dx (negative
// frequencies for m > n/2).
double dft_frequency(std::size_t m, std::size_t n, double dx);

}  // namespace bandgap
