// Band-limited rank-one effective operator: root condition for the binding
// parameter theta0, its Fourier kernel, the real-space profile and the
// point-well limit checks.
#pragma once

#include <vector>

#include "bandgap/common.hpp"
#include "bandgap/sampled.hpp"

namespace bandgap::bandlimited {

struct Params {
  double A = 1.0;       // kinetic coefficient, > 0
  double B = 1.0;       // rank-one strength, > 0
  double beta = 1.0;    // cutoff exponent, > 0
  double epsilon = 0.1; // in (0, 1)

  double cutoff() const;  // frequency radius epsilon^{-beta} >= 1
  void validate() const;
};

struct ThetaSolution {
  Params params;
  double theta0 = 0.0;
  double residual = 0.0;     // root condition at theta0
  double bound_slack = 0.0;  // eps^beta/(pi^2 sqrt(A)) - |1/theta0 - 2 sqrt(A)/B|

  // chi(|xi| < cutoff) / (4 pi^2 A xi^2 + theta0^2)
  double kernel_hat(double xi) const;
};

// 1 - (B / (pi sqrt(A) theta)) atan(2 pi sqrt(A) cutoff / theta); closed
// form of the cutoff integral, strictly increasing in theta > 0.
double theta_condition(double theta, const Params& p);

// Bisection on [B/(4 sqrt A), B/sqrt A] plus Newton polish. Asserts the
// residual and the reciprocal bound; violation is a hard failure.
ThetaSolution theta0_solve(const Params& p);

// Real-space kernel on a uniform grid covering [-x_max, x_max]: inverse
// Fourier integral over the compact cutoff support via an endpoint-corrected
// Riemann sum evaluated with one FFT.
SampledFunction kernel_realspace(const ThetaSolution& sol, double x_max, double dx_target);

// sup_x |f0(x) - (1/B) e^{-B |x| / (2A)}| over the samples; the amplitude
// 1/B is forced by the root condition (f0(0) = int f0hat = 1/B).
double kernel_profile_distance(const SampledFunction& f0, const Params& p);

// (4 pi^2 A xi^2 + theta^2) fhat - B chi (integral of chi fhat); fhat given
// as samples on a uniform xi-grid that must cover the cutoff.
std::vector<cplx> apply_L0(double theta, const SampledFunction& fhat, const Params& p);

}  // namespace bandgap::bandlimited
