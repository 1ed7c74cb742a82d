// Effective coupling B_eff, the homogenized point-well model (E2, alpha0,
// g0), the low-pass filtered perturbation, and the two-scale remainder scan.
#pragma once

#include <functional>
#include <vector>

#include "bandgap/bloch.hpp"
#include "bandgap/oscillatory.hpp"
#include "bandgap/sampled.hpp"

namespace bandgap::effective {

// Homogenized point-well model at a lower band edge:
//   -A_eff d^2/dy^2 - B_eff delta(y), unique bound state
//   E2 = -B^2/(4A), decay rate |alpha0| = B/(2A), profile g0(y) = e^{alpha0 |y|}.
struct EffectiveModel {
  double A_eff = 0.0;
  double B_eff = 0.0;
  double E2 = 0.0;
  double alpha0 = 0.0;

  double g0(double y) const;
  double predicted_energy(double E_star, double eps) const;
  // Decay length of the predicted eigenfunction profile g0(eps^2 x).
  double localization_length(double eps) const;
};

struct QuadResult {
  double value = 0.0;
  double quad_error = 0.0;  // |full-step - half-step| estimate
};

// Lambda_eff(x) = sum_{j != 0} |q_j(x)|^2 / (2 pi lambda_j)^2, both signs of
// each stored term included.
double lambda_eff_at(const OscillatorySpec& spec, double x);

// B_eff = int |u(x)|^2 Lambda_eff(x) dx (two-scale limit form).
QuadResult b_eff_two_scale(const OscillatorySpec& spec, const bloch::BlochEigenpair& u_star);

// Low-pass filter Qhat(xi) = qhat(xi) / (1 + 4 pi^2 xi^2) applied on the
// sample's dual grid.
SampledFunction filtered_potential(const SampledFunction& q);

// B(eps) = eps^{-2} int |u(x)|^2 q_eps(x) Q_eps(x) dx with Q_eps the
// filtered potential of the given samples.
double b_eff_general(const SampledFunction& q_samples, const bloch::BlochEigenpair& u_star,
                     double eps);

// Non-two-scale form for q_eps(x) = q(x/eps^gamma):
// B_eff = |u(0)|^2 int |int_{-inf}^x q|^2 dx. Requires int q = 0.
double b_eff_rescaled(const std::function<double(double)>& q, const bloch::BlochEigenpair& u_star,
                      double half_width, double step);

// Point-well model from a lower band edge. Rejects d2E <= 0 (no bifurcation
// from an upper edge) and negative B_eff.
EffectiveModel build_model(const bloch::BandEdge& edge, double B_eff);

struct RemainderScan {
  std::vector<double> eps_grid;
  std::vector<double> remainder;  // R(eps) = |int f q_eps Q_eps - eps^2 sum_m int f |q_m|^2 / (4 pi^2 lambda_m^2)|
  double slope = 0.0;             // log-log fit
};

RemainderScan remainder_scan(const std::function<double(double)>& f,
                             const OscillatorySpec& spec,
                             const std::vector<double>& eps_grid);

}  // namespace bandgap::effective
