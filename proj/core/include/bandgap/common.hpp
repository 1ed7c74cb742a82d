// Shared numeric helpers: grids, quadrature, least-squares fits.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bandgap {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Composite trapezoid on uniformly spaced samples.
inline double trapezoid(std::span<const double> v, double dx) {
  if (v.size() < 2) return 0.0;
  double s = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
  return s * dx;
}

inline cplx trapezoid(std::span<const cplx> v, double dx) {
  if (v.size() < 2) return {};
  cplx s = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
  return s * dx;
}

// Least-squares line y = a + b x; returns {a, b}.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw NumericError("fit_line: need >= 2 matched points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw NumericError("fit_line: degenerate abscissae");
  return {(sy * sxx - sx * sxy) / det, (n * sxy - sx * sy) / det};
}

// Slope of log|y| vs log(x); skips non-positive y values.
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] > 0.0 && x[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  return fit_line(lx, ly).slope;
}

// Uniform grid of n points covering [a, b] inclusive.
inline std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n < 2) throw NumericError("linspace: need n >= 2");
  std::vector<double> g(n);
  const double dx = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = a + dx * static_cast<double>(i);
  g.back() = b;
  return g;
}

// Uniform Brillouin-zone grid over (-1/2, 1/2]: k_j = -1/2 + (j+1)/K.
// K even makes both 0 and 1/2 grid points.
inline std::vector<double> brillouin_grid(std::size_t K) {
  if (K < 2 || K % 2 != 0) throw ConfigError("brillouin_grid: K must be even, >= 2");
  std::vector<double> g(K);
  for (std::size_t j = 0; j < K; ++j)
    g[j] = -0.5 + static_cast<double>(j + 1) / static_cast<double>(K);
  return g;
}

// Wrap a quasimomentum into (-1/2, 1/2].
inline double wrap_bz(double k) {
  double w = k - std::floor(k + 0.5);
  if (w <= -0.5) w += 1.0;
  return w;
}

}  // namespace bandgap
