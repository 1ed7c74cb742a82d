#include "bandgap/bloch.hpp"

#include <algorithm>
#include <cmath>

namespace bandgap::bloch {

cplx BlochEigenpair::p_at(double x) const {
  const int M = mode_cutoff();
  cplx s{};
  for (int n = -M; n <= M; ++n)
    s += p_coeffs[n + M] * std::polar(1.0, two_pi * n * x);
  return s;
}

cplx BlochEigenpair::u_at(double x) const {
  return std::polar(1.0, two_pi * k * x) * p_at(x);
}

double BlochEigenpair::abs_u_sq(double x) const { return std::norm(p_at(x)); }

cplx BlochEigenpair::du_at(double x) const {
  const int M = mode_cutoff();
  cplx s{};
  for (int n = -M; n <= M; ++n)
    s += cplx(0.0, two_pi * (n + k)) * p_coeffs[n + M] *
         std::polar(1.0, two_pi * (n + k) * x);
  return s;
}

double BandStructure::band_min(int b) const {
  double m = bands.at(b).front().energy;
  for (const auto& e : bands[b]) m = std::min(m, e.energy);
  return m;
}

double BandStructure::band_max(int b) const {
  double m = bands.at(b).front().energy;
  for (const auto& e : bands[b]) m = std::max(m, e.energy);
  return m;
}

std::optional<Gap> BandStructure::gap_above(int b) const {
  for (const auto& g : gaps)
    if (g.lower_band == b) return g;
  return std::nullopt;
}

Eigen::MatrixXcd assemble_bloch_matrix(const PeriodicPotential& Q, double k, int M) {
  if (M < Q.max_mode() + 2)
    throw ConfigError("assemble_bloch_matrix: cutoff M < N_Q + 2");
  const int dim = 2 * M + 1;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
  for (int m = -M; m <= M; ++m) {
    H(m + M, m + M) = 4.0 * pi * pi * (m + k) * (m + k) + Q.coeff(0);
    for (int n = m + 1; n <= std::min(M, m + Q.max_mode()); ++n) {
      const cplx q = Q.coeff(m - n);
      H(m + M, n + M) = q;
      H(n + M, m + M) = std::conj(q);  // bitwise Hermitian
    }
  }
  return H;
}

namespace {

// Gauge: largest-magnitude coefficient rotated real positive; optional
// sign flip toward the previous k-point's eigenvector.
void fix_gauge(Eigen::VectorXcd& v, const Eigen::VectorXcd* prev) {
  int imax = 0;
  double amax = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > amax) {
      amax = std::abs(v[i]);
      imax = i;
    }
  }
  if (amax > 0.0) v *= std::conj(v[imax]) / amax;
  if (prev && prev->size() == v.size()) {
    const double ov = (prev->adjoint() * v)(0).real();
    if (ov < 0.0) v = -v;
  }
}

}  // namespace

std::vector<BlochEigenpair> solve_bloch(const PeriodicPotential& Q, double k, int M,
                                        int n_bands,
                                        const std::vector<BlochEigenpair>* prev) {
  if (n_bands > 2 * M)
    throw ConfigError("solve_bloch: n_bands exceeds 2M");
  const Eigen::MatrixXcd H = assemble_bloch_matrix(Q, k, M);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success)
    throw NumericError("solve_bloch: Hermitian eigensolver failed to converge");
  std::vector<BlochEigenpair> out;
  out.reserve(n_bands);
  for (int b = 0; b < n_bands; ++b) {
    BlochEigenpair ep;
    ep.band = b;
    ep.k = k;
    ep.energy = es.eigenvalues()[b];
    ep.p_coeffs = es.eigenvectors().col(b);
    ep.p_coeffs.normalize();  // L2([0,1]) via Parseval
    const Eigen::VectorXcd* pv = nullptr;
    if (prev && b < static_cast<int>(prev->size())) pv = &(*prev)[b].p_coeffs;
    fix_gauge(ep.p_coeffs, pv);
    out.push_back(std::move(ep));
  }
  return out;
}

BandStructure band_scan(const PeriodicPotential& Q, const std::vector<double>& k_grid,
                        int n_bands, int M) {
  BandStructure bs;
  bs.k_grid = k_grid;
  bs.bands.assign(n_bands, {});
  for (auto& v : bs.bands) v.reserve(k_grid.size());
  std::vector<BlochEigenpair> prev;
  for (double k : k_grid) {
    auto eps = solve_bloch(Q, k, M, n_bands, prev.empty() ? nullptr : &prev);
    for (int b = 0; b < n_bands; ++b) bs.bands[b].push_back(eps[b]);
    prev = std::move(eps);
  }
  for (int b = 0; b + 1 < n_bands; ++b) {
    const double lo = bs.band_max(b);
    const double hi = bs.band_min(b + 1);
    if (hi - lo > 1e-8 * (1.0 + std::abs(hi)))
      bs.gaps.push_back({b, lo, hi});
  }
  return bs;
}

namespace {

double energy_at(const PeriodicPotential& Q, int b, double k, int M) {
  return solve_bloch(Q, wrap_bz(k), M, b + 1)[b].energy;
}

}  // namespace

BandEdge band_edge_analysis(const PeriodicPotential& Q, int b_star, double k_star,
                            int M, double h_k, double simplicity_tol) {
  if (k_star != 0.0 && k_star != 0.5)
    throw ConfigError("band_edge_analysis: k_star must be 0 or 1/2");

  auto at_edge = solve_bloch(Q, k_star, M, b_star + 2);
  BandEdge edge;
  edge.b_star = b_star;
  edge.k_star = k_star;
  edge.E_star = at_edge[b_star].energy;
  edge.u_star = at_edge[b_star];
  edge.simplicity_margin = at_edge[b_star + 1].energy - edge.E_star;
  if (b_star > 0) {
    const double below = energy_at(Q, b_star - 1, k_star, M);
    edge.simplicity_margin = std::min(edge.simplicity_margin, edge.E_star - below);
  }
  if (edge.simplicity_margin < simplicity_tol)
    throw NumericError("band_edge_analysis: edge eigenvalue is not simple within tolerance");

  const auto E = [&](double k) { return energy_at(Q, b_star, k, M); };
  const double E0 = edge.E_star;
  const double h = h_k;
  const double d2_h = (E(k_star + h) - 2.0 * E0 + E(k_star - h)) / (h * h);
  const double d2_h2 =
      (E(k_star + h / 2) - 2.0 * E0 + E(k_star - h / 2)) / (h * h / 4.0);
  edge.d2E = (4.0 * d2_h2 - d2_h) / 3.0;  // Richardson step
  edge.dE_residual = std::abs(E(k_star + h) - E(k_star - h)) / (2.0 * h);
  edge.d3E_estimate = std::abs(E(k_star + 2 * h) - 2.0 * E(k_star + h) +
                               2.0 * E(k_star - h) - E(k_star - 2 * h)) /
                      (2.0 * h * h * h);
  if (edge.dE_residual > 1e-4 * (1.0 + std::abs(edge.d2E)))
    throw NumericError("band_edge_analysis: dE/dk does not vanish at the requested edge");

  edge.kind = edge.d2E > 0.0 ? EdgeKind::Lower : EdgeKind::Upper;
  return edge;
}

WeylReport weyl_check(const BandStructure& bs, const PeriodicPotential& Q) {
  if (bs.bands.size() < 6)
    throw ConfigError("weyl_check: need at least 6 computed bands");
  WeylReport r;
  for (std::size_t b = 0; b < bs.bands.size(); ++b) {
    const double lo = pi * pi * static_cast<double>(b * b);
    const double hi = pi * pi * static_cast<double>((b + 1) * (b + 1));
    for (const auto& ep : bs.bands[b]) {
      r.C1 = std::max(r.C1, lo - ep.energy);
      r.C2 = std::max(r.C2, ep.energy - hi);
    }
  }
  r.bound = 4.0 * (1.0 + Q.sup_norm());
  r.pass = std::isfinite(r.C1) && std::isfinite(r.C2) && r.C1 <= r.bound && r.C2 <= r.bound;
  return r;
}

BlochBoundReport bloch_bound_check(const BandStructure& bs) {
  const int nx = 128;
  auto fit = [&](std::size_t b_lo, std::size_t b_hi) {
    double c_sup = 0.0, c_der = 0.0;
    for (std::size_t b = b_lo; b < b_hi; ++b) {
      for (std::size_t j = 0; j < bs.k_grid.size(); j += std::max<std::size_t>(1, bs.k_grid.size() / 8)) {
        const auto& ep = bs.bands[b][j];
        double su = 0.0, sd = 0.0;
        for (int i = 0; i < nx; ++i) {
          const double x = static_cast<double>(i) / nx;
          su = std::max(su, std::abs(ep.p_at(x)));
          sd = std::max(sd, std::abs(ep.du_at(x)));
        }
        c_sup = std::max(c_sup, su);
        c_der = std::max(c_der, sd / (1.0 + static_cast<double>(b)));
      }
    }
    return std::pair{c_sup, c_der};
  };
  const std::size_t nb = bs.bands.size();
  auto [cs_half, cd_half] = fit(0, nb / 2);
  auto [cs_full, cd_full] = fit(0, nb);
  BlochBoundReport r;
  r.C_sup = cs_full;
  r.C_deriv = cd_full;
  r.stability = std::max(std::abs(cs_full - cs_half) / cs_full,
                         std::abs(cd_full - cd_half) / cd_full);
  r.pass = r.stability < 0.2;
  return r;
}

}  // namespace bandgap::bloch
