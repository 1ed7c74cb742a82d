// Quasimomentum fiber decomposition of functions on the line: transform,
// inverse, Bloch convolution, band projections and the weighted fiber norm.
#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "bandgap/bloch.hpp"
#include "bandgap/potential.hpp"
#include "bandgap/sampled.hpp"

namespace bandgap::gelfand {

// Fibered representation: for each k on a uniform Brillouin-zone grid the
// one-periodic fiber x -> F(x;k) = sum_n e^{2 pi i n x} fhat(k+n) is stored
// through its x-Fourier coefficients coef(m, n - n_min) = fhat(k_m + n).
struct BlochTransform {
  std::vector<double> k_grid;  // brillouin_grid(K)
  int n_min = 0;
  int n_max = 0;
  Eigen::MatrixXcd coef;       // K x (n_max - n_min + 1)

  int modes() const { return n_max - n_min + 1; }
  // fhat(k_m + n); zero outside the stored mode range.
  cplx coef_at(std::size_t m, int n) const;
  // F(x; k_m)
  cplx fiber_at(std::size_t m, double x) const;
};

// Transform by frequency slicing. Rejects samples that have not decayed at
// the window boundary (relative level 1e-10), since the semidiscrete
// Fourier view would alias.
BlochTransform transform(const SampledFunction& f, std::size_t K, int n_min, int n_max);

// Lattice-sum form sum_nu e^{-2 pi i k (nu + x)} f(nu + x); independent
// oracle for the frequency-slice construction.
cplx lattice_sum(const std::function<cplx(double)>& f, double x, double k, int nu_range);

// f(x) = int_BZ e^{2 pi i x k} F(x;k) dk, rectangle rule over the k-grid.
cplx inverse_at(const BlochTransform& F, double x);
// Inverse evaluated on the grid of `like` (values replaced).
SampledFunction inverse_transform(const BlochTransform& F, const SampledFunction& like);

// Transform of the pointwise product from the fibered factors: BZ
// convolution in k with pseudo-periodic continuation across the zone edge.
BlochTransform convolution(const BlochTransform& F, const BlochTransform& G);

// Multiplication by a one-periodic potential acts fiberwise: coefficient
// convolution with Vhat in n at fixed k.
BlochTransform multiply_periodic(const BlochTransform& F, const PeriodicPotential& V);

// Pseudo-periodicity defect max |fhat(k_m + 1 + n) - coef(m, n+1)| measured
// from fresh semidiscrete transforms of f.
double pseudo_periodicity_defect(const BlochTransform& F, const SampledFunction& f);

// Band coefficient functions T_b{f}(k_m) = <p_b(.;k_m), F(.;k_m)>.
std::vector<cplx> project_mode(const BlochTransform& F, const PeriodicPotential& Q, int band,
                               int M);
// All bands at once: row b, column m.
Eigen::MatrixXcd project_all(const BlochTransform& F, const PeriodicPotential& Q, int n_bands,
                             int M);

// Sup over sampled (x, k_m) of |F - sum_{b<n_bands} T_b p_b|.
double completeness_residual(const BlochTransform& F, const PeriodicPotential& Q, int n_bands,
                             int M);

struct XsNorm {
  double value = 0.0;       // truncated sum of (1+b^2)^s int |T_b|^2 dk
  double tail_bound = 0.0;  // geometric extrapolation of the last octave
};

XsNorm xs_norm(const BlochTransform& F, const PeriodicPotential& Q, double s, int n_bands,
               int M);

// int (1+xi^2)^s |fhat(xi)|^2 dxi by quadrature, for norm-equivalence checks.
double hs_norm_sq(const SampledFunction& f, double s, double xi_max, std::size_t n_xi);

}  // namespace bandgap::gelfand
