// Floquet-Bloch spectrum of -d^2/dx^2 + Q on the line: dispersion curves,
// Bloch periodic parts, spectral gaps and band-edge derivative data.
#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bandgap/common.hpp"
#include "bandgap/potential.hpp"

namespace bandgap::bloch {

// One k-pseudo-periodic eigenpair. p_coeffs holds the Fourier coefficients
// of the periodic part p_b(x;k) over modes |n| <= M, normalized to
// ||p||_{L2([0,1])} = 1 with the phase gauge fixed (largest coefficient
// real positive).
struct BlochEigenpair {
  int band = 0;
  double k = 0.0;
  double energy = 0.0;
  Eigen::VectorXcd p_coeffs;

  int mode_cutoff() const { return static_cast<int>(p_coeffs.size() / 2); }
  cplx p_at(double x) const;            // p_b(x;k)
  cplx u_at(double x) const;            // e^{2 pi i k x} p_b(x;k)
  double abs_u_sq(double x) const;      // |u_b(x;k)|^2 = |p_b(x;k)|^2
  cplx du_at(double x) const;           // d/dx u_b(x;k)
};

struct Gap {
  int lower_band = 0;      // gap sits between band b and b+1
  double lo = 0.0;         // sup_k E_b
  double hi = 0.0;         // inf_k E_{b+1}
  double length() const { return hi - lo; }
};

struct BandStructure {
  std::vector<double> k_grid;
  // bands[b][j] is the eigenpair of band b at k_grid[j].
  std::vector<std::vector<BlochEigenpair>> bands;
  std::vector<Gap> gaps;

  double band_min(int b) const;
  double band_max(int b) const;
  // Gap directly above band b, if open.
  std::optional<Gap> gap_above(int b) const;
};

enum class EdgeKind { Lower, Upper };

struct BandEdge {
  int b_star = 0;
  double k_star = 0.0;           // 0 or 1/2
  double E_star = 0.0;
  double d2E = 0.0;              // d^2E/dk^2 at k_star (Richardson-extrapolated)
  EdgeKind kind = EdgeKind::Lower;
  BlochEigenpair u_star;         // Bloch wave at the edge
  double simplicity_margin = 0.0;  // |E_{next} - E_star| at k_star
  double dE_residual = 0.0;        // |dE/dk| finite-difference residual
  double d3E_estimate = 0.0;       // odd-derivative residual, ~0 at an edge

  double a_eff() const { return d2E / (8.0 * pi * pi); }
};

// Plane-wave Hamiltonian at quasimomentum k, modes |n| <= M:
// H(m,n) = 4 pi^2 (m+k)^2 delta_{mn} + qhat_{m-n}. Exactly Hermitian by
// construction. Requires M >= N_Q + 2.
Eigen::MatrixXcd assemble_bloch_matrix(const PeriodicPotential& Q, double k, int M);

// Lowest n_bands eigenpairs at k, sorted by energy, L2-normalized and
// gauge-fixed. `prev` (same k-scan, neighbouring k) steers the sign gauge
// for continuity.
std::vector<BlochEigenpair> solve_bloch(const PeriodicPotential& Q, double k, int M,
                                        int n_bands,
                                        const std::vector<BlochEigenpair>* prev = nullptr);

// Dispersion over a k-grid plus the open-gap inventory.
BandStructure band_scan(const PeriodicPotential& Q, const std::vector<double>& k_grid,
                        int n_bands, int M);

// Band-edge data at k_star in {0, 1/2}. h_k is the base step for the
// second-derivative stencil. Throws NumericError when the edge fails the
// structural requirements (closed gap, non-simple, dE/dk residual).
BandEdge band_edge_analysis(const PeriodicPotential& Q, int b_star, double k_star,
                            int M, double h_k = 1e-3,
                            double simplicity_tol = 1e-8);

// Default plane-wave cutoff for a given potential.
inline int default_cutoff(const PeriodicPotential& Q) {
  return std::max(32, 4 * Q.max_mode());
}

struct WeylReport {
  double C1 = 0.0;
  double C2 = 0.0;
  double bound = 0.0;   // 4 (1 + ||Q||_inf)
  bool pass = false;
};

// Minimal constants with pi^2 b^2 - C1 <= E_b(k) <= pi^2 (b+1)^2 + C2
// over the computed set; requires >= 6 bands.
WeylReport weyl_check(const BandStructure& bs, const PeriodicPotential& Q);

struct BlochBoundReport {
  double C_sup = 0.0;        // fitted sup_x |u_b|
  double C_deriv = 0.0;      // fitted sup_x |u_b'| / (1+b)
  double stability = 0.0;    // relative change of C under doubling the b-range
  bool pass = false;
};

BlochBoundReport bloch_bound_check(const BandStructure& bs);

}  // namespace bandgap::bloch
