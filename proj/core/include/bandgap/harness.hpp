// End-to-end pipeline: configuration, prediction from the effective model,
// direct validation across an epsilon grid, and the CSV-emitting commands.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bandgap/bloch.hpp"
#include "bandgap/direct.hpp"
#include "bandgap/effective.hpp"
#include "bandgap/oscillatory.hpp"
#include "bandgap/potential.hpp"

namespace bandgap::harness {

struct SolverKnobs {
  int M = 32;                 // plane-wave cutoff (raised to the potential minimum)
  double h_k = 1e-3;          // band-edge derivative stencil
  std::size_t k_points = 64;  // Brillouin-zone grid for scans
  int n_bands = 8;
  double h_rule = 20.0;       // direct grid h = eps / h_rule
  double L_factor = 12.0;     // L = L_factor / (|alpha0| eps^2), floored at L_min
  double L_min = 30.0;
  double gap_margin = 8.0;    // search window E_star + gap_margin eps^4 E2
  std::size_t max_points = 300000000;
  std::size_t workers = 1;
};

struct RunConfig {
  PeriodicPotential potential;
  OscillatorySpec perturbation;
  int b_star = 0;
  double k_star = 0.0;
  std::vector<double> epsilon_grid{0.2, 0.14, 0.1, 0.07, 0.05};
  SolverKnobs solver;
  std::string hash;  // FNV-1a over the canonical JSON text

  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_file(const std::string& path);

  int cutoff() const;  // max(M, default cutoff for the potential)
};

std::string fnv1a_hex(const std::string& text);

struct Prediction {
  bloch::BandEdge edge;
  effective::EffectiveModel model;
  double b_eff_quad_error = 0.0;
  double gap_lo = 0.0;  // lower end of the hosting gap (below E_star);
                        // for a constant background the continuum edge hosts
                        // a half-infinite gap and gap_lo is -inf
};

Prediction predict(const RunConfig& cfg);

struct ValidationRow {
  double eps = 0.0;
  double E_star = 0.0;
  double E_pred = 0.0;
  std::optional<double> E_eps;
  double gap_lo = 0.0, gap_hi = 0.0;  // searched interval
  double ratio = 0.0;                 // (E_eps - E_star) / (eps^4 E2)
  double profile_sup_err = 0.0;       // vs |u g0(eps^2 x)|, amplitude-matched
  double loc_len = 0.0;
  double loc_len_pred = 0.0;
  double residual = 0.0;
  bool accepted = false;
  std::string note;
};

ValidationRow validate_one(const RunConfig& cfg, const Prediction& pred, double eps);

struct Validation {
  Prediction prediction;
  std::vector<ValidationRow> rows;
  double slope = 0.0;  // log|E_eps - E_star| vs log eps over accepted rows
};

Validation validate(const RunConfig& cfg);

// Commands: compute, then write <name>_<hash>.csv into out_dir; return the
// written path. ConfigError and NumericError propagate to the caller.
std::string cmd_bands(const RunConfig& cfg, const std::string& out_dir);
std::string cmd_predict(const RunConfig& cfg, const std::string& out_dir);
std::string cmd_validate(const RunConfig& cfg, const std::string& out_dir);
std::string cmd_verify(const RunConfig& cfg, const std::string& out_dir);

}  // namespace bandgap::harness
