#include "bandgap/oscillatory.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace bandgap {

double Envelope::operator()(double x) const {
  const double u = x / width;
  switch (kind) {
    case Kind::Gaussian:
      return amp * std::exp(-u * u);
    case Kind::DGaussian:
      return amp * (-2.0 * u / width) * std::exp(-u * u);
  }
  return 0.0;
}

double Envelope::decay_halfwidth(double tol) const {
  if (amp == 0.0) return 1.0;
  // Coarse outward scan then bisection on |env(x)| = tol; the profiles are
  // monotone past their last extremum.
  double x = width;
  while (std::abs((*this)(x)) >= tol && x < 1e4 * width) x *= 1.5;
  double lo = x / 1.5, hi = x;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::abs((*this)(mid)) >= tol ? lo : hi) = mid;
  }
  return hi;
}

OscillatorySpec OscillatorySpec::from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  if (j.contains("perturbation")) j = j["perturbation"];
  OscillatorySpec spec;
  spec.epsilon = j.value("epsilon", 0.1);
  if (!(spec.epsilon > 0.0)) throw ConfigError("perturbation.epsilon must be > 0");
  const std::string mode = j.value("mode", std::string("two-scale"));
  if (mode == "two-scale") {
    spec.mode = Mode::TwoScale;
  } else if (mode == "rescaled") {
    spec.mode = Mode::Rescaled;
    spec.gamma = j.value("gamma", 2.0 / 3.0);
  } else {
    throw ConfigError("perturbation.mode must be two-scale or rescaled");
  }
  for (const auto& t : j.value("terms", nlohmann::json::array())) {
    OscillatoryTerm term;
    term.lambda = t.at("lambda").get<double>();
    if (!(term.lambda > 0.0))
      throw ConfigError("perturbation terms list the lambda > 0 half only");
    const auto& env = t.at("envelope");
    const std::string kind = env.value("kind", std::string("gaussian"));
    if (kind == "gaussian") {
      term.envelope.kind = Envelope::Kind::Gaussian;
    } else if (kind == "dgaussian") {
      term.envelope.kind = Envelope::Kind::DGaussian;
    } else {
      throw ConfigError("envelope.kind must be gaussian or dgaussian");
    }
    term.envelope.amp = env.value("amp", 1.0);
    term.envelope.width = env.value("width", 1.0);
    if (!(term.envelope.width > 0.0)) throw ConfigError("envelope.width must be > 0");
    spec.terms.push_back(term);
  }
  return spec;
}

double OscillatorySpec::q_at(double x) const {
  if (mode == Mode::Rescaled) {
    double s = 0.0;
    const double y = x / std::pow(epsilon, gamma);
    for (const auto& t : terms) s += t.envelope(y);
    return s;
  }
  double s = 0.0;
  for (const auto& t : terms)
    s += 2.0 * t.envelope(x) * std::cos(two_pi * t.lambda * x / epsilon);
  return s;
}

double OscillatorySpec::envelope_halfwidth(double tol) const {
  double X = 1.0;
  for (const auto& t : terms) X = std::max(X, t.envelope.decay_halfwidth(tol));
  if (mode == Mode::Rescaled) X *= std::pow(epsilon, gamma);
  return X;
}

void OscillatorySpec::check_nonclustering(double theta) const {
  // Frequencies come in +/- pairs, so separation must also hold between
  // lambda_j and -lambda_l, i.e. on lambda_j + lambda_l.
  for (std::size_t j = 0; j < terms.size(); ++j) {
    if (std::abs(terms[j].lambda) < theta)
      throw ConfigError("nonclustering violated: |lambda| below theta");
    for (std::size_t l = 0; l < terms.size(); ++l) {
      if (l != j && std::abs(terms[j].lambda - terms[l].lambda) < theta)
        throw ConfigError("nonclustering violated: frequency pair too close");
      if (std::abs(terms[j].lambda + terms[l].lambda) < theta)
        throw ConfigError("nonclustering violated: mirrored pair too close");
    }
  }
}

OscillatorySpec OscillatorySpec::with_epsilon(double eps) const {
  OscillatorySpec s = *this;
  s.epsilon = eps;
  return s;
}

OscillatorySpec OscillatorySpec::scaled(double c) const {
  OscillatorySpec s = *this;
  for (auto& t : s.terms) t.envelope.amp *= c;
  return s;
}

SampledFunction materialize(const OscillatorySpec& spec, double half_width, double step) {
  if (spec.mode == OscillatorySpec::Mode::TwoScale) {
    double lmax = 0.0;
    for (const auto& t : spec.terms) lmax = std::max(lmax, t.lambda);
    if (lmax > 0.0 && step > spec.epsilon / (8.0 * lmax))
      throw ConfigError("materialize: grid does not resolve the carrier (need >= 8 points per wavelength)");
  }
  return SampledFunction::sample([&](double x) { return cplx{spec.q_at(x), 0.0}; },
                                 half_width, step);
}

}  // namespace bandgap
