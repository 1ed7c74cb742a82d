#include "bandgap/potential.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

namespace bandgap {

PeriodicPotential::PeriodicPotential(std::vector<cplx> coeffs) {
  if (coeffs.empty() || coeffs.size() % 2 == 0)
    throw ConfigError("PeriodicPotential: coefficient list must have odd size 2N+1");
  n_max_ = static_cast<int>(coeffs.size() / 2);
  coeffs_ = std::move(coeffs);
  // Reality: qhat_{-n} must equal conj(qhat_n); symmetrize and reject gross
  // violations so downstream Hermiticity is exact.
  for (int n = 1; n <= n_max_; ++n) {
    cplx& a = coeffs_[static_cast<std::size_t>(n_max_ + n)];
    cplx& b = coeffs_[static_cast<std::size_t>(n_max_ - n)];
    if (std::abs(b - std::conj(a)) > 1e-12 * (1.0 + std::abs(a)))
      throw ConfigError("PeriodicPotential: coefficients violate reality constraint");
    b = std::conj(a);
  }
  cplx& dc = coeffs_[static_cast<std::size_t>(n_max_)];
  if (std::abs(dc.imag()) > 1e-12 * (1.0 + std::abs(dc)))
    throw ConfigError("PeriodicPotential: mean coefficient must be real");
  dc = cplx{dc.real(), 0.0};
}

PeriodicPotential PeriodicPotential::from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  if (j.contains("potential")) j = j["potential"];
  std::map<int, cplx> modes;
  if (j.contains("fourier")) {
    for (const auto& row : j["fourier"]) {
      if (!row.is_array() || row.size() != 3)
        throw ConfigError("potential.fourier rows must be [n, re, im]");
      const int n = row[0].get<int>();
      const cplx v{row[1].get<double>(), row[2].get<double>()};
      modes[n] = v;
      if (modes.find(-n) == modes.end()) modes[-n] = std::conj(v);
    }
  }
  int nmax = 0;
  for (const auto& [n, v] : modes) nmax = std::max(nmax, std::abs(n));
  std::vector<cplx> c(static_cast<std::size_t>(2 * nmax + 1), cplx{});
  for (const auto& [n, v] : modes) c[static_cast<std::size_t>(n + nmax)] = v;
  return PeriodicPotential(std::move(c));
}

cplx PeriodicPotential::coeff(int n) const {
  if (std::abs(n) > n_max_) return {};
  return coeffs_[static_cast<std::size_t>(n + n_max_)];
}

double PeriodicPotential::operator()(double x) const {
  cplx s = coeffs_[static_cast<std::size_t>(n_max_)];
  for (int n = 1; n <= n_max_; ++n) {
    const cplx ph = std::polar(1.0, two_pi * n * x);
    s += coeff(n) * ph + coeff(-n) * std::conj(ph);
  }
  return s.real();
}

double PeriodicPotential::sup_norm() const {
  double m = 0.0;
  const int ns = std::max(64, 16 * (2 * n_max_ + 1));
  for (int i = 0; i < ns; ++i)
    m = std::max(m, std::abs((*this)(static_cast<double>(i) / ns)));
  return m;
}

}  // namespace bandgap
