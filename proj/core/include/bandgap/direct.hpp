// Ground-truth eigensolver: finite-difference truncation of -d^2/dx^2 + Q +
// q on [-L, L] with Dirichlet ends, spectrum counting by Sturm sequences,
// gap eigenvalue bisection and defect-mode extraction.
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bandgap/common.hpp"
#include "bandgap/potential.hpp"
#include "bandgap/sampled.hpp"

namespace bandgap::direct {

// Eigenvalues of a general symmetric tridiagonal strictly below E (shifted
// LDL pivot signs, exact in exact arithmetic).
std::size_t sturm_count_below(std::span<const double> diag, std::span<const double> offdiag,
                              double E);

struct DefectMode {
  double energy = 0.0;
  double residual = 0.0;             // ||(H - E) psi|| / ||psi|| on the window
  double localization_length = 0.0;  // fitted exponential decay length
  double mu_decay = 1.0;             // per-step tail ratio in constant background
  SampledFunction psi;               // real samples, max-normalized

  // psi continued by the exact geometric tail outside the stored window.
  double psi_at(double x) const;
  double mass_fraction_outside(double x_abs, double L) const;
};

// -d^2/dx^2 + Q + q on the interior grid x_i = -L + (i+1) h, Dirichlet at
// +-L. q is truncated to |x| <= q_halfwidth. When Q is constant the long
// constant-potential stretches are traversed in O(1) by closed-form pivot
// propagation, so the matrix dimension may exceed max_points; otherwise
// every operation iterates the full grid and max_points is enforced.
class TruncatedHamiltonian {
 public:
  TruncatedHamiltonian(const PeriodicPotential& Q, std::function<double(double)> q,
                       double q_halfwidth, double L, double h,
                       std::size_t max_points = 300000000);

  std::size_t size() const { return n_; }
  double step() const { return h_; }
  double half_width() const { return L_; }
  double x_at(std::size_t i) const { return h_ * static_cast<double>(i + 1) - L_; }
  double potential_at(std::size_t i) const;
  bool constant_background() const { return constant_bg_; }

  std::size_t count_below(double E) const;

  // All eigenvalues in (lo, hi), each bisected to 1e-12 (1 + |E|).
  std::vector<double> eigenvalues_in(double lo, double hi) const;

  // Unique genuine eigenvalue in (lo + delta, hi - delta) after discarding
  // Dirichlet boundary artifacts; nullopt when none, NumericError when the
  // interior candidates are not unique.
  std::optional<double> gap_eigenvalue(double lo, double hi, double delta) const;

  DefectMode eigenvector(double E) const;

  // Keep candidates whose mode mass in the outer 10% of [-L, L] is <= 1%.
  std::vector<double> filter_artifacts(const std::vector<double>& candidates) const;

  // Materialized diagonal, for dense cross-checks on small problems.
  std::vector<double> dense_diag(std::size_t cap = 100000) const;

 private:
  double L_ = 0.0;
  double h_ = 0.0;
  std::size_t n_ = 0;
  double c_ = 0.0;          // 1/h^2
  bool constant_bg_ = true;
  double W_ = 0.0;          // constant background value
  PeriodicPotential Q_;
  std::function<double(double)> q_;
  std::size_t core_lo_ = 0, core_hi_ = 0;  // inclusive index range, empty if lo > hi
  std::vector<double> core_V_;             // Q + q on the core window
  std::size_t max_points_ = 0;

  DefectMode eigenvector_window(double E) const;  // constant background path
  DefectMode eigenvector_full(double E) const;
};

}  // namespace bandgap::direct
