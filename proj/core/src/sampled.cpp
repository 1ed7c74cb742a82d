#include "bandgap/sampled.hpp"

#include <cmath>

#include <fftw3.h>

namespace bandgap {

SampledFunction SampledFunction::sample(const std::function<cplx(double)>& f,
                                        double half_width, double step) {
  if (!(half_width > 0.0) || !(step > 0.0))
    throw ConfigError("SampledFunction::sample: window and step must be positive");
  const auto n_half = static_cast<std::size_t>(std::ceil(half_width / step));
  SampledFunction s;
  s.dx = step;
  s.x0 = -step * static_cast<double>(n_half);
  s.values.resize(2 * n_half + 1);
  for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] = f(s.x_at(i));
  return s;
}

cplx SampledFunction::fourier_at(double xi) const {
  // Phase recurrence keeps the per-sample cost at one complex multiply.
  const cplx step = std::polar(1.0, -two_pi * xi * dx);
  cplx ph = std::polar(1.0, -two_pi * xi * x0);
  cplx s{};
  for (const cplx& v : values) {
    s += v * ph;
    ph *= step;
  }
  return s * dx;
}

double SampledFunction::max_abs() const {
  double m = 0.0;
  for (const cplx& v : values) m = std::max(m, std::abs(v));
  return m;
}

double SampledFunction::boundary_abs() const {
  if (values.empty()) return 0.0;
  return std::max(std::abs(values.front()), std::abs(values.back()));
}

double SampledFunction::max_imag() const {
  double m = 0.0;
  for (const cplx& v : values) m = std::max(m, std::abs(v.imag()));
  return m;
}

double SampledFunction::l2_norm() const {
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = std::norm(values[i]);
  return std::sqrt(trapezoid(std::span<const double>(sq), dx));
}

SampledFunction& SampledFunction::operator+=(const SampledFunction& o) {
  if (o.size() != size() || o.dx != dx || o.x0 != x0)
    throw NumericError("SampledFunction: incompatible grids in +=");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  return *this;
}

SampledFunction& SampledFunction::operator*=(double s) {
  for (cplx& v : values) v *= s;
  return *this;
}

namespace {

std::vector<cplx> run_fftw(const std::vector<cplx>& v, int sign) {
  std::vector<cplx> out(v.size());
  auto* in_ptr = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(v.data()));
  auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(v.size()), in_ptr, out_ptr,
                                    sign, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  if (!plan) throw NumericError("fftw_plan_dft_1d failed");
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

}  // namespace

std::vector<cplx> dft_forward(const std::vector<cplx>& v) {
  return run_fftw(v, FFTW_FORWARD);
}

std::vector<cplx> dft_inverse(const std::vector<cplx>& v) {
  auto out = run_fftw(v, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(v.size());
  for (cplx& c : out) c *= scale;
  return out;
}

double dft_frequency(std::size_t m, std::size_t n, double dx) {
  const double mm = m <= n / 2 ? static_cast<double>(m)
                               : static_cast<double>(m) - static_cast<double>(n);
  return mm / (dx * static_cast<double>(n));
}

}  // namespace bandgap
