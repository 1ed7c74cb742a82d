#include "bandgap/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bandgap/bandlimited.hpp"
#include "bandgap/csv.hpp"
#include "bandgap/gelfand.hpp"

namespace bandgap::harness {

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  cfg.hash = fnv1a_hex(j.dump());
  cfg.potential = PeriodicPotential::from_json(text);
  if (j.contains("perturbation")) cfg.perturbation = OscillatorySpec::from_json(text);
  if (j.contains("band")) {
    cfg.b_star = j["band"].value("b_star", 0);
    cfg.k_star = j["band"].value("k_star", 0.0);
  }
  if (j.contains("epsilon_grid")) {
    cfg.epsilon_grid = j["epsilon_grid"].get<std::vector<double>>();
  }
  if (cfg.epsilon_grid.empty()) throw ConfigError("epsilon_grid must be non-empty");
  for (std::size_t i = 0; i < cfg.epsilon_grid.size(); ++i) {
    const double e = cfg.epsilon_grid[i];
    if (!(e > 0.0 && e < 0.5)) throw ConfigError("epsilon_grid entries must lie in (0, 0.5)");
    if (i > 0 && e >= cfg.epsilon_grid[i - 1])
      throw ConfigError("epsilon_grid must be sorted descending");
  }
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    cfg.solver.M = s.value("M", cfg.solver.M);
    cfg.solver.h_k = s.value("h_k", cfg.solver.h_k);
    cfg.solver.k_points = s.value("k_points", cfg.solver.k_points);
    cfg.solver.n_bands = s.value("n_bands", cfg.solver.n_bands);
    cfg.solver.h_rule = s.value("h_rule", cfg.solver.h_rule);
    cfg.solver.L_factor = s.value("L_factor", cfg.solver.L_factor);
    cfg.solver.L_min = s.value("L_min", cfg.solver.L_min);
    cfg.solver.gap_margin = s.value("gap_margin", cfg.solver.gap_margin);
    cfg.solver.max_points = s.value("max_points", cfg.solver.max_points);
    cfg.solver.workers = s.value("workers", cfg.solver.workers);
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_json_text(ss.str());
}

int RunConfig::cutoff() const {
  return std::max(solver.M, bloch::default_cutoff(potential));
}

Prediction predict(const RunConfig& cfg) {
  Prediction pred;
  pred.edge = bloch::band_edge_analysis(cfg.potential, cfg.b_star, cfg.k_star,
                                        cfg.cutoff(), cfg.solver.h_k);
  const auto beff = effective::b_eff_two_scale(cfg.perturbation, pred.edge.u_star);
  pred.model = effective::build_model(pred.edge, beff.value);
  pred.b_eff_quad_error = beff.quad_error;

  if (cfg.b_star == 0) {
    // band 0 bifurcates into the half-infinite gap below the spectrum
    pred.gap_lo = -std::numeric_limits<double>::infinity();
  } else {
    const auto bs = bloch::band_scan(cfg.potential, brillouin_grid(cfg.solver.k_points),
                                     std::max(cfg.solver.n_bands, cfg.b_star + 2),
                                     cfg.cutoff());
    const auto gap = bs.gap_above(cfg.b_star - 1);
    if (!gap) throw NumericError("predict: no open gap below the requested band edge");
    pred.gap_lo = gap->lo;
  }
  return pred;
}

namespace {

double profile_error(const direct::DefectMode& mode, const bloch::BlochEigenpair& u,
                     const effective::EffectiveModel& model, double eps, double L) {
  // Prediction |u(x)| g0(eps^2 x); amplitude matched at the predicted peak
  // (the eigenfunction is only defined up to a constant).
  const auto phi = [&](double x) {
    return std::abs(u.p_at(x)) * model.g0(eps * eps * x);
  };
  std::vector<double> xs;
  const std::size_t stride = std::max<std::size_t>(1, mode.psi.size() / 20000);
  for (std::size_t i = 0; i < mode.psi.size(); i += stride) xs.push_back(mode.psi.x_at(i));
  const double x_tail = std::min(L, 4.0 * model.localization_length(eps));
  for (int i = 0; i <= 512; ++i) {
    const double x = mode.psi.x_end() + (x_tail - mode.psi.x_end()) * i / 512.0;
    if (x > mode.psi.x_end()) {
      xs.push_back(x);
      xs.push_back(-x);
    }
  }
  double phimax = 0.0, xstar = 0.0;
  for (double x : xs) {
    if (phi(x) > phimax) {
      phimax = phi(x);
      xstar = x;
    }
  }
  const double psistar = std::abs(mode.psi_at(xstar));
  if (psistar == 0.0) return std::numeric_limits<double>::infinity();
  const double scale = phimax / psistar;
  double err = 0.0;
  for (double x : xs) err = std::max(err, std::abs(scale * std::abs(mode.psi_at(x)) - phi(x)));
  return err;
}

}  // namespace

ValidationRow validate_one(const RunConfig& cfg, const Prediction& pred, double eps) {
  ValidationRow row;
  row.eps = eps;
  row.E_star = pred.edge.E_star;
  row.E_pred = pred.model.predicted_energy(pred.edge.E_star, eps);
  row.loc_len_pred = pred.model.localization_length(eps);
  if (pred.model.B_eff == 0.0) {
    row.note = "zero effective coupling; no bifurcation predicted";
    return row;
  }
  const double e4E2 = eps * eps * eps * eps * pred.model.E2;
  row.gap_lo = std::max(pred.gap_lo, pred.edge.E_star + cfg.solver.gap_margin * e4E2);
  row.gap_hi = pred.edge.E_star;

  const double h = eps / cfg.solver.h_rule;
  const double L = std::max(cfg.solver.L_factor / (std::abs(pred.model.alpha0) * eps * eps),
                            cfg.solver.L_min);
  const auto spec_e = cfg.perturbation.with_epsilon(eps);
  const double q_hw = spec_e.envelope_halfwidth(1e-20);
  try {
    const direct::TruncatedHamiltonian ham(
        cfg.potential, [&](double x) { return spec_e.q_at(x); }, q_hw, L, h,
        cfg.solver.max_points);
    const double delta = 1e-4 * (row.gap_hi - row.gap_lo);
    const auto E = ham.gap_eigenvalue(row.gap_lo, row.gap_hi, delta);
    if (!E) {
      row.note = "no defect mode in the searched window";
      return row;
    }
    row.E_eps = *E;
    row.ratio = (*E - pred.edge.E_star) / e4E2;
    const auto mode = ham.eigenvector(*E);
    row.residual = mode.residual;
    row.loc_len = mode.localization_length;
    row.profile_sup_err =
        profile_error(mode, pred.edge.u_star, pred.model, eps, ham.half_width());
    row.accepted = *E < pred.edge.E_star && *E > row.gap_lo + delta && row.residual <= 1e-6;
  } catch (const NumericError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), ',', ';');
    row.note = msg;
  }
  return row;
}

Validation validate(const RunConfig& cfg) {
  Validation v;
  v.prediction = predict(cfg);
  v.rows.resize(cfg.epsilon_grid.size());
  if (cfg.solver.workers > 1) {
    std::vector<std::future<ValidationRow>> futs;
    futs.reserve(cfg.epsilon_grid.size());
    for (double eps : cfg.epsilon_grid)
      futs.push_back(std::async(std::launch::async,
                                [&, eps] { return validate_one(cfg, v.prediction, eps); }));
    for (std::size_t i = 0; i < futs.size(); ++i) v.rows[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < cfg.epsilon_grid.size(); ++i)
      v.rows[i] = validate_one(cfg, v.prediction, cfg.epsilon_grid[i]);
  }
  std::vector<double> xs, ys;
  for (const auto& r : v.rows) {
    if (r.accepted && r.E_eps)
      xs.push_back(r.eps), ys.push_back(std::abs(*r.E_eps - r.E_star));
  }
  v.slope = xs.size() >= 2 ? loglog_slope(xs, ys) : 0.0;
  return v;
}

namespace {

std::string out_path(const RunConfig& cfg, const std::string& out_dir,
                     const std::string& command) {
  std::filesystem::create_directories(out_dir);
  return (std::filesystem::path(out_dir) / (command + "_" + cfg.hash + ".csv")).string();
}

}  // namespace

std::string cmd_bands(const RunConfig& cfg, const std::string& out_dir) {
  const auto bs = bloch::band_scan(cfg.potential, brillouin_grid(cfg.solver.k_points),
                                   cfg.solver.n_bands, cfg.cutoff());
  csv::Writer w({"k", "band", "energy"});
  w.comment("config " + cfg.hash);
  for (const auto& g : bs.gaps)
    w.comment("gap " + std::to_string(g.lower_band) + " " + csv::cell(g.lo) + " " +
              csv::cell(g.hi));
  for (std::size_t b = 0; b < bs.bands.size(); ++b)
    for (std::size_t j = 0; j < bs.k_grid.size(); ++j)
      w.row({csv::cell(bs.k_grid[j]), csv::cell(b), csv::cell(bs.bands[b][j].energy)});
  const auto path = out_path(cfg, out_dir, "bands");
  w.write_file(path);
  return path;
}

std::string cmd_predict(const RunConfig& cfg, const std::string& out_dir) {
  const auto pred = predict(cfg);
  csv::Writer w({"eps", "E_pred"});
  w.comment("config " + cfg.hash);
  w.comment("E_star " + csv::cell(pred.edge.E_star));
  w.comment("A_eff " + csv::cell(pred.model.A_eff));
  w.comment("B_eff " + csv::cell(pred.model.B_eff));
  w.comment("B_eff_quad_error " + csv::cell(pred.b_eff_quad_error));
  w.comment("E2 " + csv::cell(pred.model.E2));
  w.comment("alpha0 " + csv::cell(pred.model.alpha0));
  for (double eps : cfg.epsilon_grid)
    w.row({csv::cell(eps), csv::cell(pred.model.predicted_energy(pred.edge.E_star, eps))});
  const auto path = out_path(cfg, out_dir, "predict");
  w.write_file(path);
  return path;
}

std::string cmd_validate(const RunConfig& cfg, const std::string& out_dir) {
  const auto v = validate(cfg);
  csv::Writer w({"eps", "E_star", "E_pred", "E_eps", "gap_lo", "gap_hi", "ratio",
                 "profile_sup_err", "loc_len", "loc_len_pred", "residual", "accepted",
                 "note"});
  w.comment("config " + cfg.hash);
  w.comment("slope " + csv::cell(v.slope));
  for (const auto& r : v.rows) {
    w.row({csv::cell(r.eps), csv::cell(r.E_star), csv::cell(r.E_pred),
           r.E_eps ? csv::cell(*r.E_eps) : "nan", csv::cell(r.gap_lo), csv::cell(r.gap_hi),
           csv::cell(r.ratio), csv::cell(r.profile_sup_err), csv::cell(r.loc_len),
           csv::cell(r.loc_len_pred), csv::cell(r.residual), r.accepted ? "1" : "0",
           r.note});
  }
  const auto path = out_path(cfg, out_dir, "validate");
  w.write_file(path);
  return path;
}

std::string cmd_verify(const RunConfig& cfg, const std::string& out_dir) {
  csv::Writer w({"group", "name", "measured", "threshold", "pass"});
  w.comment("config " + cfg.hash);
  const auto report = [&](const std::string& group, const std::string& name, double measured,
                          double threshold, bool pass) {
    w.row({group, name, csv::cell(measured), csv::cell(threshold), pass ? "1" : "0"});
  };

  // Bloch matrix Hermiticity is exact by construction.
  {
    const auto H = bloch::assemble_bloch_matrix(cfg.potential, 0.3, cfg.cutoff());
    const double defect = (H - H.adjoint()).cwiseAbs().maxCoeff();
    report("bloch", "hermiticity_defect", defect, 0.0, defect == 0.0);
  }
  {
    const auto bs = bloch::band_scan(cfg.potential, brillouin_grid(cfg.solver.k_points),
                                     std::max(cfg.solver.n_bands, 8), cfg.cutoff());
    const auto weyl = bloch::weyl_check(bs, cfg.potential);
    report("bloch", "weyl_constant_C1", weyl.C1, weyl.bound, weyl.pass);
    report("bloch", "weyl_constant_C2", weyl.C2, weyl.bound, weyl.pass);
    const auto bb = bloch::bloch_bound_check(bs);
    report("bloch", "uniform_bound_stability", bb.stability, 0.2, bb.pass);
  }
  // Fiber-transform identities on a Gaussian probe.
  {
    const auto f = SampledFunction::sample(
        [](double x) { return cplx{std::exp(-x * x), 0.0}; }, 12.0, 1.0 / 64.0);
    const auto F = gelfand::transform(f, 64, -8, 8);
    const auto back = gelfand::inverse_transform(F, f);
    double round = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      round = std::max(round, std::abs(back.values[i] - f.values[i]));
    report("gelfand", "round_trip_sup", round, 1e-8, round <= 1e-8);
    double poisson = 0.0;
    for (std::size_t m = 0; m < F.k_grid.size(); m += 8)
      for (int i = 0; i < 8; ++i)
        poisson = std::max(poisson,
                           std::abs(F.fiber_at(m, i / 8.0) -
                                    gelfand::lattice_sum(
                                        [](double x) { return cplx{std::exp(-x * x), 0.0}; },
                                        i / 8.0, F.k_grid[m], 16)));
    report("gelfand", "lattice_sum_identity", poisson, 1e-9, poisson <= 1e-9);
  }
  // Band-limited operator hard bounds over the parameter grid.
  {
    double min_slack = std::numeric_limits<double>::infinity();
    double max_residual = 0.0;
    for (double A : {0.5, 1.0, 2.0})
      for (double B : {0.5, 1.0, 2.0})
        for (double beta : {0.5, 1.0, 2.0})
          for (double eps : {0.2, 0.1, 0.05}) {
            const auto sol = bandlimited::theta0_solve({A, B, beta, eps});
            min_slack = std::min(min_slack, sol.bound_slack);
            max_residual = std::max(max_residual, sol.residual);
          }
    report("bandlimited", "root_residual_max", max_residual, 1e-12, max_residual <= 1e-12);
    report("bandlimited", "reciprocal_bound_min_slack", min_slack, 0.0, min_slack > 0.0);
  }
  // Two-scale remainder slope for the configured perturbation.
  if (cfg.perturbation.mode == OscillatorySpec::Mode::TwoScale &&
      !cfg.perturbation.terms.empty()) {
    const auto scan = effective::remainder_scan([](double) { return 1.0; }, cfg.perturbation,
                                                cfg.epsilon_grid);
    report("effective", "remainder_slope", scan.slope, 2.7, scan.slope >= 2.7);
  }

  const auto path = out_path(cfg, out_dir, "verify");
  w.write_file(path);
  return path;
}

}  // namespace bandgap::harness
