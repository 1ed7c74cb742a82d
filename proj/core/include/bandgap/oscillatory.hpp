// Localized high-frequency perturbations q_eps(x) = sum_j q_j(x) e^{2 pi i
// lambda_j x / eps} with real-valued result and decaying envelopes.
#pragma once

#include <string>
#include <vector>

#include "bandgap/common.hpp"
#include "bandgap/sampled.hpp"

namespace bandgap {

// Closed-form decaying envelope. Gaussian: amp * exp(-(x/width)^2);
// DGaussian: amp * d/dx exp(-(x/width)^2).
struct Envelope {
  enum class Kind { Gaussian, DGaussian };
  Kind kind = Kind::Gaussian;
  double amp = 1.0;
  double width = 1.0;

  double operator()(double x) const;
  // Half-width X with |envelope| < tol for |x| > X.
  double decay_halfwidth(double tol) const;
};

struct OscillatoryTerm {
  double lambda = 1.0;  // fast frequency, must be > 0; the conjugate partner
                        // at -lambda is implicit (reality of q)
  Envelope envelope;
};

// Two-scale perturbation spec. Stored terms cover lambda > 0 only; the full
// sum includes the mirrored terms, so q_eps(x) = sum_j 2 q_j(x)
// cos(2 pi lambda_j x / eps) for real envelopes.
struct OscillatorySpec {
  enum class Mode { TwoScale, Rescaled };
  Mode mode = Mode::TwoScale;
  double epsilon = 0.1;
  double gamma = 2.0 / 3.0;  // rescaled mode: q_eps(x) = q(x / eps^gamma)
  std::vector<OscillatoryTerm> terms;

  static OscillatorySpec from_json(const std::string& json_text);

  double q_at(double x) const;  // q_eps(x)
  double envelope_at(std::size_t j, double x) const { return terms[j].envelope(x); }

  // Smallest X with every envelope below tol outside [-X, X].
  double envelope_halfwidth(double tol = 1e-12) const;
  // Frequency separation: min over pairs of |lambda_j - lambda_l| and over
  // singles of |lambda_j| (both signs included). Throws when below theta.
  void check_nonclustering(double theta) const;

  OscillatorySpec with_epsilon(double eps) const;
  OscillatorySpec scaled(double c) const;  // all envelopes scaled by c
};

// Real samples of q_eps on [-half_width, half_width]. Requires at least 8
// points per carrier wavelength eps / max_j lambda_j.
SampledFunction materialize(const OscillatorySpec& spec, double half_width, double step);

}  // namespace bandgap
