#include "bandgap/effective.hpp"

#include <algorithm>
#include <cmath>

namespace bandgap::effective {

double EffectiveModel::g0(double y) const {
  return std::exp(alpha0 * std::abs(y));  // alpha0 < 0
}

double EffectiveModel::predicted_energy(double E_star, double eps) const {
  return E_star + eps * eps * eps * eps * E2;
}

double EffectiveModel::localization_length(double eps) const {
  return 1.0 / (std::abs(alpha0) * eps * eps);
}

double lambda_eff_at(const OscillatorySpec& spec, double x) {
  if (spec.mode != OscillatorySpec::Mode::TwoScale)
    throw ConfigError("lambda_eff: two-scale spec required");
  double s = 0.0;
  for (const auto& t : spec.terms) {
    const double q = t.envelope(x);
    // stored term plus its mirrored conjugate partner
    s += 2.0 * q * q / (two_pi * t.lambda * two_pi * t.lambda);
  }
  return s;
}

namespace {

double weighted_integral(const std::function<double(double)>& w, double X, double step) {
  const auto n = static_cast<std::size_t>(std::ceil(2.0 * X / step)) + 1;
  const double dx = 2.0 * X / static_cast<double>(n - 1);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = w(-X + dx * static_cast<double>(i));
  return trapezoid(std::span<const double>(v), dx);
}

}  // namespace

QuadResult b_eff_two_scale(const OscillatorySpec& spec, const bloch::BlochEigenpair& u_star) {
  const double X = spec.envelope_halfwidth(1e-12);
  const auto integrand = [&](double x) {
    return u_star.abs_u_sq(x) * lambda_eff_at(spec, x);
  };
  const double step = std::min(1.0 / 256.0, X / 256.0);
  QuadResult r;
  r.value = weighted_integral(integrand, X, step / 2.0);
  r.quad_error = std::abs(r.value - weighted_integral(integrand, X, step));
  if (r.value < 0.0) throw NumericError("b_eff_two_scale: negative integral");
  return r;
}

SampledFunction filtered_potential(const SampledFunction& q) {
  auto spec_side = dft_forward(q.values);
  const std::size_t n = spec_side.size();
  for (std::size_t m = 0; m < n; ++m) {
    const double xi = dft_frequency(m, n, q.dx);
    spec_side[m] /= 1.0 + 4.0 * pi * pi * xi * xi;
  }
  SampledFunction out = q;
  out.values = dft_inverse(spec_side);
  return out;
}

double b_eff_general(const SampledFunction& q_samples, const bloch::BlochEigenpair& u_star,
                     double eps) {
  if (q_samples.boundary_abs() > 1e-10 * (1.0 + q_samples.max_abs()))
    throw ConfigError("b_eff_general: q does not decay at the window boundary");
  const SampledFunction Q = filtered_potential(q_samples);
  std::vector<double> v(q_samples.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = q_samples.x_at(i);
    v[i] = u_star.abs_u_sq(x) * (q_samples.values[i] * Q.values[i]).real();
  }
  return trapezoid(std::span<const double>(v), q_samples.dx) / (eps * eps);
}

double b_eff_rescaled(const std::function<double(double)>& q, const bloch::BlochEigenpair& u_star,
                      double half_width, double step) {
  const auto n = static_cast<std::size_t>(std::ceil(2.0 * half_width / step)) + 1;
  const double dx = 2.0 * half_width / static_cast<double>(n - 1);
  std::vector<double> P(n);  // running antiderivative of q from -X
  double acc = 0.0, prev = q(-half_width), pmax = 0.0;
  P[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double cur = q(-half_width + dx * static_cast<double>(i));
    acc += 0.5 * dx * (prev + cur);
    prev = cur;
    P[i] = acc;
    pmax = std::max(pmax, std::abs(acc));
  }
  if (std::abs(P.back()) > 1e-6 * (pmax + 1e-300))
    throw ConfigError("b_eff_rescaled: antiderivative does not decay (int q != 0)");
  for (double& p : P) p *= p;
  return u_star.abs_u_sq(0.0) * trapezoid(std::span<const double>(P), dx);
}

EffectiveModel build_model(const bloch::BandEdge& edge, double B_eff) {
  if (edge.d2E <= 0.0)
    throw ConfigError("build_model: bifurcation requires a lower edge (d2E > 0)");
  if (B_eff < 0.0) throw ConfigError("build_model: B_eff must be >= 0");
  EffectiveModel m;
  m.A_eff = edge.a_eff();
  m.B_eff = B_eff;
  m.E2 = -B_eff * B_eff / (4.0 * m.A_eff);
  m.alpha0 = -B_eff / (2.0 * m.A_eff);
  return m;
}

RemainderScan remainder_scan(const std::function<double(double)>& f,
                             const OscillatorySpec& spec,
                             const std::vector<double>& eps_grid) {
  if (spec.mode != OscillatorySpec::Mode::TwoScale)
    throw ConfigError("remainder_scan: two-scale spec required");
  RemainderScan scan;
  scan.eps_grid = eps_grid;
  const double X = spec.envelope_halfwidth(1e-12) + 1.0;
  for (double eps : eps_grid) {
    const auto spec_e = spec.with_epsilon(eps);
    const SampledFunction q = materialize(spec_e, X, eps / 40.0);
    const SampledFunction Q = filtered_potential(q);
    std::vector<double> v(q.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = f(q.x_at(i)) * (q.values[i] * Q.values[i]).real();
    const double I1 = trapezoid(std::span<const double>(v), q.dx);
    double I2 = 0.0;
    for (const auto& t : spec_e.terms) {
      const double w =
          weighted_integral([&](double x) { return f(x) * t.envelope(x) * t.envelope(x); },
                            X, q.dx);
      I2 += 2.0 * w / (two_pi * t.lambda * two_pi * t.lambda);
    }
    I2 *= eps * eps;
    scan.remainder.push_back(std::abs(I1 - I2));
  }
  scan.slope = loglog_slope(scan.eps_grid, scan.remainder);
  return scan;
}

}  // namespace bandgap::effective
