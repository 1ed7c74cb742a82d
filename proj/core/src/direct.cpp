#include "bandgap/direct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bandgap::direct {

namespace {

using ld = long double;

// Pivot-product state for the Sturm recurrence p_i = (a_i - E) p_{i-1} -
// C p_{i-2}. Only the last pair (up to positive rescaling) and the number of
// sign changes (= pivots d_i = p_i / p_{i-1} < 0 = eigenvalues below E) are
// tracked. Extended precision: the count resolution is ||T|| * eps and the
// gap eigenvalues sit many orders below the 2/h^2 diagonal scale.
struct PivotState {
  ld pa = 0.0L;  // p_{i-1}
  ld pb = 1.0L;  // p_i
  std::size_t negatives = 0;

  void step(ld a_minus_E, ld C) {
    ld pn = a_minus_E * pb - C * pa;
    if (pn == 0.0L) pn = -std::numeric_limits<ld>::min() * std::max<ld>(1.0L, std::abs(pb));
    if ((pn < 0.0L) != (pb < 0.0L)) ++negatives;
    pa = pb;
    pb = pn;
    const ld m = std::abs(pb);
    if (m > 1e2400L || m < 1e-2400L) {
      pa /= m;
      pb /= m;
    }
  }
};

// Closed-form traversal of m grid points with constant diagonal shift A =
// 2c + W - E, valid in the hyperbolic regime |A| > 2c (E outside the local
// band [W, W + 4c] of the constant stretch). Characteristic roots mu_{+-} =
// (A +- sqrt(A^2-4c^2))/2; the sign pattern of p_k = mu_+^k (alpha + beta
// rho^k), rho = mu_-/mu_+ in (0,1), changes at most once.
bool constant_jump(PivotState& st, ld A, ld c, std::size_t m) {
  if (m == 0) return true;
  if (A < 0.0L) {
    // p'_k = (-1)^k p_k obeys the mirrored recurrence with A' = -A; counts
    // complement and the end pair flips one relative sign.
    PivotState mir;
    mir.pa = -st.pa;
    mir.pb = st.pb;
    if (!constant_jump(mir, -A, c, m)) return false;
    st.pa = mir.pa;
    st.pb = -mir.pb;
    st.negatives += m - mir.negatives;
    return true;
  }
  const ld s = A - 2.0L * c;
  if (s <= 0.0L) return false;  // elliptic: no real root splitting
  const ld C = c * c;
  const ld sqD = std::sqrt(s * (s + 4.0L * c));
  const ld mu_p = 0.5L * (A + sqD);
  const ld mu_m = C / mu_p;
  const ld ln_rho = -2.0L * std::log1p((s + sqD) / (2.0L * c));
  const ld alpha = (st.pb * mu_p - C * st.pa) / sqD;
  const ld beta = (C * st.pa - st.pb * mu_m) / sqD;

  std::size_t changes = 0;
  if (alpha != 0.0L && beta != 0.0L && (alpha < 0.0L) != (beta < 0.0L)) {
    const ld kstar = std::log(-alpha / beta) / ln_rho;
    if (kstar > 0.0L && kstar < static_cast<ld>(m)) changes = 1;
  }
  const ld md = static_cast<ld>(m);
  const ld g_prev = alpha + beta * std::exp(ln_rho * (md - 1.0L));
  const ld g_end = alpha + beta * std::exp(ln_rho * md);
  ld na = g_prev;
  ld nb = mu_p * g_end;
  const ld nm = std::max(std::abs(na), std::abs(nb));
  if (nm > 0.0L) {
    na /= nm;
    nb /= nm;
  } else {
    // both components vanished to underflow: pure decaying direction
    na = 1.0L;
    nb = mu_m;
  }
  st.pa = na;
  st.pb = nb;
  st.negatives += changes;
  return true;
}

constexpr std::size_t elliptic_cap = 1000000000;

}  // namespace

std::size_t sturm_count_below(std::span<const double> diag, std::span<const double> offdiag,
                              double E) {
  if (!diag.empty() && offdiag.size() + 1 != diag.size())
    throw ConfigError("sturm_count_below: offdiag size must be n-1");
  PivotState st;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const ld C = i == 0 ? 0.0L : static_cast<ld>(offdiag[i - 1]) * offdiag[i - 1];
    st.step(static_cast<ld>(diag[i]) - E, C);
  }
  return st.negatives;
}

TruncatedHamiltonian::TruncatedHamiltonian(const PeriodicPotential& Q,
                                           std::function<double(double)> q,
                                           double q_halfwidth, double L, double h,
                                           std::size_t max_points)
    : Q_(Q), q_(std::move(q)), max_points_(max_points) {
  if (!(h > 0.0) || !(L > 0.0)) throw ConfigError("TruncatedHamiltonian: L, h must be > 0");
  if (q_halfwidth < 0.0 || L < q_halfwidth + 1.0)
    throw ConfigError("TruncatedHamiltonian: need L >= q_halfwidth + 1");
  const auto m_half = static_cast<std::size_t>(std::ceil(L / h));
  h_ = h;
  L_ = h * static_cast<double>(m_half);
  n_ = 2 * m_half - 1;
  c_ = 1.0 / (h * h);
  constant_bg_ = Q_.max_mode() == 0;
  W_ = Q_.coeff(0).real();
  if (!constant_bg_ && n_ > max_points_)
    throw NumericError(
        "TruncatedHamiltonian: dimension exceeds the iteration budget for a "
        "non-constant background (no O(1) traversal of periodic stretches)");

  const std::size_t center = m_half - 1;  // x = 0
  const auto hw = static_cast<std::size_t>(std::floor(q_halfwidth / h));
  if (q_ && q_halfwidth > 0.0) {
    core_lo_ = center >= hw ? center - hw : 0;
    core_hi_ = std::min(n_ - 1, center + hw);
  } else {
    core_lo_ = 1;
    core_hi_ = 0;  // empty
  }
  if (core_lo_ <= core_hi_) {
    const std::size_t m = core_hi_ - core_lo_ + 1;
    if (m > max_points_)
      throw NumericError("TruncatedHamiltonian: core window exceeds the point budget");
    core_V_.resize(m);
    double qmax = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double x = x_at(core_lo_ + i);
      const double qv = q_(x);
      qmax = std::max(qmax, std::abs(qv));
      core_V_[i] = (constant_bg_ ? W_ : Q_(x)) + qv;
    }
    const double q_edge = std::max(std::abs(q_(-L_)), std::abs(q_(L_)));
    if (q_edge > 1e-10 * (1.0 + qmax))
      throw ConfigError("TruncatedHamiltonian: q has not decayed at the domain ends");
  }
}

double TruncatedHamiltonian::potential_at(std::size_t i) const {
  if (core_lo_ <= core_hi_ && i >= core_lo_ && i <= core_hi_) return core_V_[i - core_lo_];
  return constant_bg_ ? W_ : Q_(x_at(i));
}

std::size_t TruncatedHamiltonian::count_below(double E) const {
  PivotState st;
  const ld C = static_cast<ld>(c_) * c_;
  const ld two_c = 2.0L * static_cast<ld>(c_);
  if (constant_bg_) {
    const ld A = two_c + static_cast<ld>(W_) - E;
    const std::size_t pre = core_lo_ <= core_hi_ ? core_lo_ : n_;
    if (!constant_jump(st, A, c_, pre)) {
      if (pre > elliptic_cap)
        throw NumericError("count_below: elliptic constant stretch too long to iterate");
      for (std::size_t i = 0; i < pre; ++i) st.step(A, C);
    }
    if (core_lo_ <= core_hi_) {
      for (const double V : core_V_) st.step(two_c + static_cast<ld>(V) - E, C);
      const std::size_t post = n_ - core_hi_ - 1;
      if (!constant_jump(st, A, c_, post)) {
        if (post > elliptic_cap)
          throw NumericError("count_below: elliptic constant stretch too long to iterate");
        for (std::size_t i = 0; i < post; ++i) st.step(A, C);
      }
    }
    return st.negatives;
  }
  for (std::size_t i = 0; i < n_; ++i)
    st.step(two_c + static_cast<ld>(potential_at(i)) - E, C);
  return st.negatives;
}

std::vector<double> TruncatedHamiltonian::eigenvalues_in(double lo, double hi) const {
  if (!(lo < hi)) throw ConfigError("eigenvalues_in: empty interval");
  const std::size_t c_lo = count_below(lo);
  const std::size_t c_hi = count_below(hi);
  std::vector<double> out;
  for (std::size_t t = c_lo; t < c_hi; ++t) {
    double a = lo, b = hi;
    while (b - a > 1e-12 * (1.0 + 0.5 * (std::abs(a) + std::abs(b)))) {
      const double mid = 0.5 * (a + b);
      if (count_below(mid) > t)
        b = mid;
      else
        a = mid;
    }
    out.push_back(0.5 * (a + b));
  }
  return out;
}

std::optional<double> TruncatedHamiltonian::gap_eigenvalue(double lo, double hi,
                                                           double delta) const {
  const auto candidates = eigenvalues_in(lo + delta, hi - delta);
  const auto genuine = filter_artifacts(candidates);
  if (genuine.empty()) return std::nullopt;
  if (genuine.size() > 1)
    throw NumericError("gap_eigenvalue: multiple genuine interior eigenvalues");
  return genuine.front();
}

namespace {

// Thomas solve of the symmetric tridiagonal with constant offdiagonal -c;
// diag passed already shifted by -E (consumed). Near-zero pivots are floored
// in magnitude, which is the standard inverse-iteration safeguard.
void thomas_solve(std::vector<double>& d, std::vector<double>& z, double c) {
  const std::size_t n = d.size();
  const auto floor_pivot = [](double p) {
    const double m = 1e-280;
    if (std::abs(p) < m) return p < 0.0 ? -m : m;
    return p;
  };
  d[0] = floor_pivot(d[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const double w = c / d[i - 1];
    d[i] = floor_pivot(d[i] - c * w);
    z[i] += w * z[i - 1];
  }
  z[n - 1] /= d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) z[i] = (z[i] + c * z[i + 1]) / d[i];
}

void max_normalize(std::vector<double>& z) {
  double m = 0.0;
  std::size_t im = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (std::abs(z[i]) > m) {
      m = std::abs(z[i]);
      im = i;
    }
  }
  if (m == 0.0) throw NumericError("eigenvector: zero iterate");
  const double s = z[im] > 0.0 ? 1.0 / m : -1.0 / m;
  for (double& v : z) v *= s;
}

double tail_fit_length(const std::vector<double>& z, double x0, double h, std::size_t lo,
                       std::size_t hi) {
  std::vector<double> xs, ls;
  for (std::size_t i = lo; i < hi; ++i) {
    if (std::abs(z[i]) > 1e-280) {
      xs.push_back(x0 + h * static_cast<double>(i));
      ls.push_back(std::log(std::abs(z[i])));
    }
  }
  if (xs.size() < 8) return 0.0;
  const double slope = fit_line(xs, ls).slope;
  return slope < 0.0 ? -1.0 / slope : 0.0;
}

}  // namespace

DefectMode TruncatedHamiltonian::eigenvector_window(double E) const {
  const double A = 2.0 * c_ + W_ - E;
  const ld s = static_cast<ld>(W_) - E;
  if (!(s > 0.0L))
    throw NumericError("eigenvector_window: energy not below the constant background");
  const ld sqD = std::sqrt(s * (s + 4.0L * static_cast<ld>(c_)));
  const double mu_d = static_cast<double>(2.0L * static_cast<ld>(c_) /
                                          (static_cast<ld>(A) + sqD));

  const std::size_t pad = 400;
  const std::size_t w_lo = core_lo_ > pad ? core_lo_ - pad : 0;
  const std::size_t w_hi = std::min(n_ - 1, core_hi_ + pad);
  const std::size_t m = w_hi - w_lo + 1;

  std::vector<double> z(m, 1.0);
  for (int it = 0; it < 3; ++it) {
    std::vector<double> d(m);
    for (std::size_t i = 0; i < m; ++i) d[i] = 2.0 * c_ + potential_at(w_lo + i) - E;
    // exact decaying-tail closure in the constant stretches (Dirichlet only
    // when the window touches the domain end)
    if (w_lo > 0) d.front() -= c_ * mu_d;
    if (w_hi < n_ - 1) d.back() -= c_ * mu_d;
    thomas_solve(d, z, c_);
    max_normalize(z);
  }

  DefectMode mode;
  mode.energy = E;
  mode.mu_decay = mu_d;
  mode.psi.x0 = x_at(w_lo);
  mode.psi.dx = h_;
  mode.psi.values.resize(m);
  for (std::size_t i = 0; i < m; ++i) mode.psi.values[i] = cplx{z[i], 0.0};

  ld rnorm = 0.0L, znorm = 0.0L;
  for (std::size_t i = 0; i < m; ++i) {
    ld r = (2.0L * static_cast<ld>(c_) + potential_at(w_lo + i) - E) * z[i];
    r -= static_cast<ld>(c_) * (i > 0 ? z[i - 1] : (w_lo > 0 ? mu_d * z[0] : 0.0));
    r -= static_cast<ld>(c_) * (i + 1 < m ? z[i + 1] : (w_hi < n_ - 1 ? mu_d * z[m - 1] : 0.0));
    rnorm += r * r;
    znorm += static_cast<ld>(z[i]) * z[i];
  }
  mode.residual = static_cast<double>(std::sqrt(rnorm / znorm));

  const std::size_t fit_lo = core_hi_ >= w_lo ? core_hi_ - w_lo + pad / 4 : m / 2;
  mode.localization_length = tail_fit_length(z, mode.psi.x0, h_, std::min(fit_lo, m), m);
  if (mode.localization_length == 0.0)
    mode.localization_length = -h_ / std::log(mu_d);
  return mode;
}

DefectMode TruncatedHamiltonian::eigenvector_full(double E) const {
  if (n_ > std::min<std::size_t>(max_points_, 20000000))
    throw NumericError("eigenvector_full: dimension exceeds the dense-vector budget");
  std::vector<double> z(n_, 1.0);
  for (int it = 0; it < 3; ++it) {
    std::vector<double> d(n_);
    for (std::size_t i = 0; i < n_; ++i) d[i] = 2.0 * c_ + potential_at(i) - E;
    thomas_solve(d, z, c_);
    max_normalize(z);
  }
  DefectMode mode;
  mode.energy = E;
  mode.mu_decay = 1.0;
  mode.psi.x0 = x_at(0);
  mode.psi.dx = h_;
  mode.psi.values.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) mode.psi.values[i] = cplx{z[i], 0.0};

  ld rnorm = 0.0L, znorm = 0.0L;
  for (std::size_t i = 0; i < n_; ++i) {
    ld r = (2.0L * static_cast<ld>(c_) + potential_at(i) - E) * z[i];
    if (i > 0) r -= static_cast<ld>(c_) * z[i - 1];
    if (i + 1 < n_) r -= static_cast<ld>(c_) * z[i + 1];
    rnorm += r * r;
    znorm += static_cast<ld>(z[i]) * z[i];
  }
  mode.residual = static_cast<double>(std::sqrt(rnorm / znorm));
  mode.localization_length = tail_fit_length(z, mode.psi.x0, h_, (3 * n_) / 4, n_);
  return mode;
}

DefectMode TruncatedHamiltonian::eigenvector(double E) const {
  if (constant_bg_ && E < W_ && core_lo_ <= core_hi_) return eigenvector_window(E);
  return eigenvector_full(E);
}

std::vector<double> TruncatedHamiltonian::filter_artifacts(
    const std::vector<double>& candidates) const {
  std::vector<double> kept;
  for (double E : candidates) {
    const DefectMode mode = eigenvector(E);
    if (mode.mass_fraction_outside(0.9 * L_, L_) <= 0.01) kept.push_back(E);
  }
  return kept;
}

std::vector<double> TruncatedHamiltonian::dense_diag(std::size_t cap) const {
  if (n_ > cap) throw ConfigError("dense_diag: dimension above the requested cap");
  std::vector<double> d(n_);
  for (std::size_t i = 0; i < n_; ++i) d[i] = 2.0 * c_ + potential_at(i);
  return d;
}

double DefectMode::psi_at(double x) const {
  const double x_end = psi.x_end();
  if (x >= psi.x0 && x <= x_end) {
    const double t = (x - psi.x0) / psi.dx;
    const auto i = std::min(psi.size() - 2, static_cast<std::size_t>(std::floor(t)));
    const double f = t - static_cast<double>(i);
    return (1.0 - f) * psi.values[i].real() + f * psi.values[i + 1].real();
  }
  if (mu_decay >= 1.0) return 0.0;
  const double ln_mu = std::log(mu_decay);
  if (x < psi.x0)
    return psi.values.front().real() * std::exp(ln_mu * (psi.x0 - x) / psi.dx);
  return psi.values.back().real() * std::exp(ln_mu * (x - x_end) / psi.dx);
}

double DefectMode::mass_fraction_outside(double x_abs, double L) const {
  (void)L;
  const double ln_mu = mu_decay < 1.0 ? std::log(mu_decay) : 0.0;
  const double rho2 = mu_decay * mu_decay;
  long double inside = 0.0L, outside = 0.0L;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double v = psi.values[i].real();
    (std::abs(psi.x_at(i)) > x_abs ? outside : inside) += static_cast<long double>(v) * v;
  }
  if (mu_decay < 1.0) {
    // geometric tails beyond the stored window
    const auto side = [&](double edge_val, double edge_x, double direction) {
      const double base = edge_val * edge_val * rho2 / (1.0 - rho2);
      const double start = direction > 0 ? edge_x : -edge_x;
      if (start >= x_abs) {
        outside += base;
      } else {
        const double j0 = (x_abs - start) / psi.dx;
        const double beyond = base * std::exp(2.0 * ln_mu * j0);
        outside += beyond;
        inside += base - beyond;
      }
    };
    side(psi.values.back().real(), psi.x_end(), +1.0);
    side(psi.values.front().real(), psi.x0, -1.0);
  }
  const long double total = inside + outside;
  return total > 0.0L ? static_cast<double>(outside / total) : 0.0;
}

}  // namespace bandgap::direct
