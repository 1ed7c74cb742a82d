#include "bandgap/gelfand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bandgap::gelfand {

cplx BlochTransform::coef_at(std::size_t m, int n) const {
  if (n < n_min || n > n_max) return {};
  return coef(static_cast<Eigen::Index>(m), n - n_min);
}

cplx BlochTransform::fiber_at(std::size_t m, double x) const {
  cplx s{};
  for (int n = n_min; n <= n_max; ++n)
    s += coef(static_cast<Eigen::Index>(m), n - n_min) * std::polar(1.0, two_pi * n * x);
  return s;
}

BlochTransform transform(const SampledFunction& f, std::size_t K, int n_min, int n_max) {
  if (n_min > n_max) throw ConfigError("transform: empty mode range");
  if (f.boundary_abs() > 1e-10 * (f.max_abs() + 1e-300))
    throw ConfigError("transform: samples have not decayed at the window boundary");
  BlochTransform F;
  F.k_grid = brillouin_grid(K);
  F.n_min = n_min;
  F.n_max = n_max;
  F.coef.resize(static_cast<Eigen::Index>(K), F.modes());
  for (std::size_t m = 0; m < K; ++m)
    for (int n = n_min; n <= n_max; ++n)
      F.coef(static_cast<Eigen::Index>(m), n - n_min) = f.fourier_at(F.k_grid[m] + n);
  return F;
}

cplx lattice_sum(const std::function<cplx(double)>& f, double x, double k, int nu_range) {
  cplx s{};
  for (int nu = -nu_range; nu <= nu_range; ++nu)
    s += std::polar(1.0, -two_pi * k * (nu + x)) * f(nu + x);
  return s;
}

cplx inverse_at(const BlochTransform& F, double x) {
  cplx s{};
  for (std::size_t m = 0; m < F.k_grid.size(); ++m)
    s += std::polar(1.0, two_pi * F.k_grid[m] * x) * F.fiber_at(m, x);
  return s / static_cast<double>(F.k_grid.size());
}

SampledFunction inverse_transform(const BlochTransform& F, const SampledFunction& like) {
  SampledFunction out = like;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = inverse_at(F, out.x_at(i));
  return out;
}

BlochTransform convolution(const BlochTransform& F, const BlochTransform& G) {
  const std::size_t K = F.k_grid.size();
  if (G.k_grid.size() != K) throw ConfigError("convolution: k-grid mismatch");
  BlochTransform H;
  H.k_grid = F.k_grid;
  H.n_min = F.n_min;
  H.n_max = F.n_max;
  H.coef = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(K), H.modes());
  const int half = static_cast<int>(K) / 2;
  for (std::size_t m = 0; m < K; ++m) {
    for (std::size_t l = 0; l < K; ++l) {
      // k_m - k_l = (m-l)/K sits at grid index j shifted by the integer s;
      // the shift moves through the coefficient index (pseudo-periodicity).
      const int j0 = static_cast<int>(m) - static_cast<int>(l) - 1 + half;
      const int s = j0 >= 0 ? j0 / static_cast<int>(K)
                            : -((-j0 + static_cast<int>(K) - 1) / static_cast<int>(K));
      const auto j = static_cast<std::size_t>(j0 - s * static_cast<int>(K));
      for (int n = H.n_min; n <= H.n_max; ++n) {
        cplx acc{};
        for (int np = F.n_min; np <= F.n_max; ++np)
          acc += F.coef(static_cast<Eigen::Index>(l), np - F.n_min) *
                 G.coef_at(j, n - np + s);
        H.coef(static_cast<Eigen::Index>(m), n - H.n_min) += acc;
      }
    }
  }
  H.coef /= static_cast<double>(K);
  return H;
}

BlochTransform multiply_periodic(const BlochTransform& F, const PeriodicPotential& V) {
  BlochTransform H = F;
  for (std::size_t m = 0; m < F.k_grid.size(); ++m) {
    for (int n = F.n_min; n <= F.n_max; ++n) {
      cplx acc{};
      for (int np = std::max(F.n_min, n - V.max_mode());
           np <= std::min(F.n_max, n + V.max_mode()); ++np)
        acc += V.coeff(n - np) * F.coef(static_cast<Eigen::Index>(m), np - F.n_min);
      H.coef(static_cast<Eigen::Index>(m), n - F.n_min) = acc;
    }
  }
  return H;
}

double pseudo_periodicity_defect(const BlochTransform& F, const SampledFunction& f) {
  double d = 0.0;
  for (std::size_t m = 0; m < F.k_grid.size(); ++m)
    for (int n = F.n_min; n + 1 <= F.n_max; ++n)
      d = std::max(d, std::abs(f.fourier_at(F.k_grid[m] + 1.0 + n) - F.coef_at(m, n + 1)));
  return d;
}

namespace {

cplx band_coefficient(const bloch::BlochEigenpair& p, const BlochTransform& F, std::size_t m) {
  const int M = p.mode_cutoff();
  cplx acc{};
  for (int n = std::max(-M, F.n_min); n <= std::min(M, F.n_max); ++n)
    acc += std::conj(p.p_coeffs[n + M]) * F.coef_at(m, n);
  return acc;
}

}  // namespace

std::vector<cplx> project_mode(const BlochTransform& F, const PeriodicPotential& Q, int band,
                               int M) {
  std::vector<cplx> out(F.k_grid.size());
  for (std::size_t m = 0; m < F.k_grid.size(); ++m) {
    const auto eps = bloch::solve_bloch(Q, F.k_grid[m], M, band + 1);
    out[m] = band_coefficient(eps[band], F, m);
  }
  return out;
}

Eigen::MatrixXcd project_all(const BlochTransform& F, const PeriodicPotential& Q, int n_bands,
                             int M) {
  Eigen::MatrixXcd T(n_bands, static_cast<Eigen::Index>(F.k_grid.size()));
  for (std::size_t m = 0; m < F.k_grid.size(); ++m) {
    const auto eps = bloch::solve_bloch(Q, F.k_grid[m], M, n_bands);
    for (int b = 0; b < n_bands; ++b)
      T(b, static_cast<Eigen::Index>(m)) = band_coefficient(eps[b], F, m);
  }
  return T;
}

double completeness_residual(const BlochTransform& F, const PeriodicPotential& Q, int n_bands,
                             int M) {
  const int nx = 32;
  double res = 0.0;
  for (std::size_t m = 0; m < F.k_grid.size(); ++m) {
    const auto eps = bloch::solve_bloch(Q, F.k_grid[m], M, n_bands);
    for (int i = 0; i < nx; ++i) {
      const double x = static_cast<double>(i) / nx;
      cplx rebuilt{};
      for (int b = 0; b < n_bands; ++b)
        rebuilt += band_coefficient(eps[b], F, m) * eps[b].p_at(x);
      res = std::max(res, std::abs(F.fiber_at(m, x) - rebuilt));
    }
  }
  return res;
}

XsNorm xs_norm(const BlochTransform& F, const PeriodicPotential& Q, double s, int n_bands,
               int M) {
  const Eigen::MatrixXcd T = project_all(F, Q, n_bands, M);
  const double invK = 1.0 / static_cast<double>(F.k_grid.size());
  std::vector<double> per_band(n_bands);
  XsNorm r;
  for (int b = 0; b < n_bands; ++b) {
    double mass = 0.0;
    for (Eigen::Index m = 0; m < T.cols(); ++m) mass += std::norm(T(b, m));
    per_band[b] = std::pow(1.0 + static_cast<double>(b) * b, s) * mass * invK;
    r.value += per_band[b];
  }
  // Geometric tail estimate from the trend across the last octave.
  if (n_bands >= 4) {
    const double hi = per_band[n_bands - 1];
    const double lo = per_band[n_bands / 2];
    if (hi <= 0.0) {
      r.tail_bound = 0.0;
    } else if (hi >= lo) {
      r.tail_bound = std::numeric_limits<double>::infinity();  // non-decaying tail
    } else {
      const double rho = std::pow(hi / lo, 1.0 / static_cast<double>(n_bands - 1 - n_bands / 2));
      r.tail_bound = hi * rho / (1.0 - rho);
    }
  }
  return r;
}

double hs_norm_sq(const SampledFunction& f, double s, double xi_max, std::size_t n_xi) {
  std::vector<double> v(n_xi);
  const double dxi = 2.0 * xi_max / static_cast<double>(n_xi - 1);
  for (std::size_t i = 0; i < n_xi; ++i) {
    const double xi = -xi_max + dxi * static_cast<double>(i);
    v[i] = std::pow(1.0 + xi * xi, s) * std::norm(f.fourier_at(xi));
  }
  return trapezoid(std::span<const double>(v), dxi);
}

}  // namespace bandgap::gelfand
