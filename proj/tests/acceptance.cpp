// Acceptance gate: seven end-to-end experiments, selected by the numeric
// command-line argument. Each prints one pass/fail line with the measured
// quantities; the exit code is the number of failures.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bandgap/bandlimited.hpp"
#include "bandgap/bloch.hpp"
#include "bandgap/direct.hpp"
#include "bandgap/effective.hpp"
#include "bandgap/gelfand.hpp"
#include "bandgap/harness.hpp"

using namespace bandgap;

namespace {

const char* kFreeConfig = R"({
  "potential": {"fourier": []},
  "perturbation": {"mode": "two-scale", "epsilon": 0.2,
    "terms": [{"lambda": 1.0, "envelope": {"kind": "gaussian", "amp": 0.5, "width": 1.0}}]},
  "band": {"b_star": 0, "k_star": 0.0},
  "epsilon_grid": [0.2, 0.14, 0.1, 0.07, 0.05],
  "solver": {"h_rule": 40.0}
})";

const char* kCosineConfig = R"({
  "potential": {"fourier": [[1, 1.0, 0.0]]},
  "perturbation": {"mode": "two-scale", "epsilon": 0.2,
    "terms": [{"lambda": 1.0, "envelope": {"kind": "gaussian", "amp": 0.5, "width": 1.0}}]},
  "band": {"b_star": 2, "k_star": 0.0},
  "epsilon_grid": [0.2, 0.14, 0.1, 0.07, 0.05],
  "solver": {"h_rule": 40.0}
})";

struct Gate {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

// 1: eigenvalue law on the homogeneous background: E^eps < 0 exists, |E^eps|
// scales like eps^4, and E^eps / (-eps^4 B^2/4) -> 1.
Gate criterion1() {
  Gate g;
  const auto cfg = harness::RunConfig::from_json_text(kFreeConfig);
  const auto v = harness::validate(cfg);
  std::vector<double> eps, mag;
  double prev_dev = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (const auto& r : v.rows) {
    g.require(r.accepted && r.E_eps.has_value(),
              "no accepted level at eps=" + std::to_string(r.eps) +
                  (r.note.empty() ? "" : " (" + r.note + ")"));
    if (!r.E_eps) continue;
    g.require(*r.E_eps < 0.0, "level not negative at eps=" + std::to_string(r.eps));
    eps.push_back(r.eps);
    mag.push_back(std::abs(*r.E_eps));
    const double dev = std::abs(r.ratio - 1.0);
    if (dev > prev_dev + 1e-6) monotone = false;
    prev_dev = dev;
  }
  if (eps.size() >= 2) {
    const double slope = loglog_slope(eps, mag);
    const double last_ratio = v.rows.back().ratio;
    g.require(std::abs(slope - 4.0) <= 0.3, "slope " + std::to_string(slope) + " not 4.0+-0.3");
    g.require(last_ratio >= 0.7 && last_ratio <= 1.3,
              "ratio " + std::to_string(last_ratio) + " outside [0.7, 1.3] at eps=0.05");
    g.require(monotone, "|ratio - 1| does not decrease along the grid");
    char buf[128];
    std::snprintf(buf, sizeof(buf), "slope=%.3f ratio@0.05=%.3f", slope, last_ratio);
    g.note(buf);
  }
  return g;
}

// 2: eigenvalue law on the cosine background at the third-band lower edge.
Gate criterion2() {
  Gate g;
  const auto cfg = harness::RunConfig::from_json_text(kCosineConfig);
  const auto pred = harness::predict(cfg);
  g.require(pred.gap_lo < pred.edge.E_star, "hosting gap is not open");
  char buf[160];
  std::snprintf(buf, sizeof(buf), "E_star=%.6f gap_lo=%.6f alpha0=%.3e", pred.edge.E_star,
                pred.gap_lo, pred.model.alpha0);
  g.note(buf);
  const auto v = harness::validate(cfg);
  std::vector<double> eps, mag;
  for (const auto& r : v.rows) {
    g.require(r.accepted && r.E_eps.has_value(),
              "no accepted level at eps=" + std::to_string(r.eps) +
                  (r.note.empty() ? "" : " (" + r.note + ")"));
    if (!r.E_eps) continue;
    g.require(*r.E_eps < r.E_star && *r.E_eps > pred.gap_lo,
              "level not inside the gap at eps=" + std::to_string(r.eps));
    eps.push_back(r.eps);
    mag.push_back(std::abs(*r.E_eps - r.E_star));
  }
  if (eps.size() >= 2) {
    const double slope = loglog_slope(eps, mag);
    g.require(std::abs(slope - 4.0) <= 0.4, "slope " + std::to_string(slope) + " not 4.0+-0.4");
    std::snprintf(buf, sizeof(buf), "slope=%.3f", slope);
    g.note(buf);
  }
  return g;
}

// 3: eigenfunction profile against |u| g0(eps^2 x) and the localization length.
Gate criterion3() {
  Gate g;
  const auto cfg = harness::RunConfig::from_json_text(kFreeConfig);
  const auto v = harness::validate(cfg);
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& r : v.rows) {
    g.require(r.accepted, "no accepted level at eps=" + std::to_string(r.eps));
    if (!r.accepted) continue;
    g.require(r.profile_sup_err <= prev + 1e-9,
              "profile error not decreasing at eps=" + std::to_string(r.eps));
    prev = r.profile_sup_err;
    g.require(std::abs(r.loc_len / r.loc_len_pred - 1.0) <= 0.3,
              "localization length off by >30% at eps=" + std::to_string(r.eps));
  }
  if (!v.rows.empty() && v.rows.back().accepted) {
    const double last = v.rows.back().profile_sup_err;
    g.require(last <= 0.15, "profile error " + std::to_string(last) + " > 0.15 at eps=0.05");
    char buf[128];
    std::snprintf(buf, sizeof(buf), "sup_err@0.05=%.4f loc_len_ratio=%.3f", last,
                  v.rows.back().loc_len / v.rows.back().loc_len_pred);
    g.note(buf);
  }
  return g;
}

// 4: band-limited point-well operator: root residual, reciprocal bound and
// the decay rate of the kernel profile distance.
Gate criterion4() {
  Gate g;
  double max_residual = 0.0, min_slack = std::numeric_limits<double>::infinity();
  double min_slope_margin = std::numeric_limits<double>::infinity();
  const std::vector<double> eps_grid{0.2, 0.1, 0.05};
  for (double A : {0.5, 1.0, 2.0})
    for (double B : {0.5, 1.0, 2.0})
      for (double beta : {0.5, 1.0, 2.0}) {
        std::vector<double> dist;
        for (double eps : eps_grid) {
          const auto sol = bandlimited::theta0_solve({A, B, beta, eps});
          max_residual = std::max(max_residual, sol.residual);
          min_slack = std::min(min_slack, sol.bound_slack);
          const double x_max = 20.0 * A / B;  // several decay lengths
          dist.push_back(bandlimited::kernel_profile_distance(
              bandlimited::kernel_realspace(sol, x_max, 0.05), sol.params));
        }
        min_slope_margin =
            std::min(min_slope_margin, loglog_slope(eps_grid, dist) - 0.8 * beta);
      }
  g.require(max_residual <= 1e-12, "root residual above 1e-12");
  g.require(min_slack > 0.0, "reciprocal bound slack not positive");
  g.require(min_slope_margin >= 0.0, "kernel distance slope below 0.8 beta");
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max_residual=%.2e min_slack=%.2e min_slope_margin=%.3f",
                max_residual, min_slack, min_slope_margin);
  g.note(buf);
  return g;
}

// 5: averaged-coupling remainder decays at third order for a single pair and
// for the nonclustering two-pair spec with an irrational frequency ratio.
Gate criterion5() {
  Gate g;
  const std::vector<double> eps_grid{0.2, 0.14, 0.1, 0.07, 0.05};
  const auto f = [](double x) { return std::exp(-0.25 * x * x); };

  OscillatorySpec one;
  one.epsilon = 0.2;
  one.terms = {{1.0, {Envelope::Kind::Gaussian, 0.5, 1.0}}};
  OscillatorySpec two = one;
  two.terms.push_back({std::sqrt(2.0), {Envelope::Kind::Gaussian, 0.4, 1.5}});
  two.check_nonclustering(0.25);

  const double s1 = effective::remainder_scan(f, one, eps_grid).slope;
  const double s2 = effective::remainder_scan(f, two, eps_grid).slope;
  g.require(s1 >= 2.7, "single-pair slope " + std::to_string(s1) + " < 2.7");
  g.require(s2 >= 2.7, "two-pair slope " + std::to_string(s2) + " < 2.7");
  char buf[96];
  std::snprintf(buf, sizeof(buf), "slope_single=%.3f slope_pair=%.3f", s1, s2);
  g.note(buf);
  return g;
}

// 6: exact identity suites for the fiber transform and the Sturm counter.
Gate criterion6() {
  Gate g;
  const double X = 40.0, step = 1.0 / 64.0;
  const std::size_t K = 64;
  const std::vector<std::function<cplx(double)>> corpus{
      [](double x) { return cplx{std::exp(-x * x), 0.0}; },
      [](double x) { return cplx{std::exp(-2.0 * x * x), 0.0}; },
      [](double x) { return cplx{std::exp(-(x - 0.3) * (x - 0.3)), 0.0}; },
      [](double x) { return cplx{x * std::exp(-x * x), 0.0}; },
      [](double x) { return cplx{(1.0 - x * x) * std::exp(-0.5 * x * x), 0.0}; },
      [](double x) { return cplx{std::exp(-x * x) * std::cos(two_pi * x), 0.0}; },
      [](double x) { return cplx{std::exp(-x * x) * std::cos(4.0 * pi * x), 0.0}; },
      [](double x) { return std::polar(std::exp(-x * x), two_pi * 3.0 * x); },
      [](double x) { return std::polar(std::exp(-1.5 * x * x), -two_pi * 2.0 * x); },
      [](double x) { return cplx{std::exp(-0.25 * x * x), 0.0}; }};
  double round = 0.0;
  for (const auto& f : corpus) {
    const auto s = SampledFunction::sample(f, X, step);
    const auto F = gelfand::transform(s, K, -8, 8);
    const auto back = gelfand::inverse_transform(F, s);
    for (std::size_t i = 0; i < s.size(); ++i)
      round = std::max(round, std::abs(back.values[i] - s.values[i]) / s.max_abs());
  }
  g.require(round <= 1e-8, "round trip above 1e-8");

  const auto fa = [](double x) { return cplx{std::exp(-x * x), 0.0}; };
  const auto fb = [](double x) { return cplx{std::exp(-2.0 * x * x), 0.0}; };
  const auto F = gelfand::transform(SampledFunction::sample(fa, X, step), K, -8, 8);
  const auto G = gelfand::transform(SampledFunction::sample(fb, X, step), K, -8, 8);
  const auto H = gelfand::convolution(F, G);
  const auto P = gelfand::transform(
      SampledFunction::sample([&](double x) { return fa(x) * fb(x); }, X, step), K, -8, 8);
  const double conv = (H.coef - P.coef).cwiseAbs().maxCoeff();
  g.require(conv <= 1e-8, "convolution identity above 1e-8");

  const PeriodicPotential V({cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{1.0, 0.0}});
  const auto VF = gelfand::transform(
      SampledFunction::sample([&](double x) { return V(x) * fa(x); }, X, step), K, -8, 8);
  double mult = 0.0;
  for (std::size_t m = 0; m < K; ++m)
    for (int i = 0; i < 8; ++i) {
      const double x = i / 8.0;
      mult = std::max(mult, std::abs(VF.fiber_at(m, x) - V(x) * F.fiber_at(m, x)));
    }
  g.require(mult <= 1e-9, "multiplication rule above 1e-9");

  const auto probe = SampledFunction::sample(
      [](double x) { return std::polar(std::exp(-x * x), two_pi * x); }, X, step);
  const auto Fp = gelfand::transform(probe, K, -8, 8);
  const auto x0 = gelfand::xs_norm(Fp, PeriodicPotential{}, 0.0, 18, 16);
  const double l2 = probe.l2_norm();
  const double parseval = std::abs(x0.value - l2 * l2) / (l2 * l2);
  g.require(parseval <= 1e-8, "flat-weight fiber norm differs from L2");

  const auto Hb = bloch::assemble_bloch_matrix(V, 0.27, 32);
  const double herm = (Hb - Hb.adjoint()).cwiseAbs().maxCoeff();
  g.require(herm == 0.0, "Bloch matrix not bitwise Hermitian");

  std::mt19937 rng(987654321);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> sizes(2, 200);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = sizes(rng);
    std::vector<double> diag(n), off(n - 1);
    for (auto& d : diag) d = unif(rng);
    for (auto& o : off) o = unif(rng);
    const double E = 2.0 * unif(rng);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag[i];
      if (i + 1 < n) {
        T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = off[i];
        T(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = off[i];
      }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
    std::size_t dense = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      dense += es.eigenvalues()[i] < E;
    mismatches += direct::sturm_count_below(diag, off, E) != dense;
  }
  g.require(mismatches == 0, std::to_string(mismatches) + " Sturm/dense mismatches");

  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "round=%.1e conv=%.1e mult=%.1e parseval=%.1e herm=%.1e mismatches=%zu",
                round, conv, mult, parseval, herm, mismatches);
  g.note(buf);
  return g;
}

// 7: structural spectral checks on the cosine potential.
Gate criterion7() {
  Gate g;
  const PeriodicPotential Q({cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{1.0, 0.0}});
  for (int b = 0; b < 4; ++b) {
    const auto e0 = bloch::band_edge_analysis(Q, b, 0.0, 32);
    const auto e5 = bloch::band_edge_analysis(Q, b, 0.5, 32);
    const bool even = b % 2 == 0;
    g.require((even ? e0.d2E > 0.0 : e0.d2E < 0.0),
              "curvature sign wrong at b=" + std::to_string(b) + " k=0");
    g.require((even ? e5.d2E < 0.0 : e5.d2E > 0.0),
              "curvature sign wrong at b=" + std::to_string(b) + " k=1/2");
  }

  const auto bs = bloch::band_scan(Q, brillouin_grid(64), 8, 32);
  const auto weyl = bloch::weyl_check(bs, Q);
  g.require(weyl.pass && std::isfinite(weyl.C1) && std::isfinite(weyl.C2),
            "Weyl constants not finite over 8 bands");

  const auto gap = bs.gap_above(0);
  g.require(gap.has_value(), "first gap not found");
  std::size_t genuine = 0;
  if (gap) {
    const direct::TruncatedHamiltonian H(Q, [](double) { return 0.0; }, 0.0, 20.0, 0.01);
    const double margin = 0.02 * gap->length();
    for (double E : H.eigenvalues_in(gap->lo + margin, gap->hi - margin)) {
      const auto mode = H.eigenvector(E);
      genuine += mode.mass_fraction_outside(0.9 * H.half_width(), H.half_width()) <= 1e-2;
    }
    g.require(genuine == 0, "genuine levels found in the unperturbed gap");
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "weyl_C1=%.2f weyl_C2=%.2f gap_levels=%zu", weyl.C1,
                weyl.C2, genuine);
  g.note(buf);
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  Gate (*const criteria[])() = {criterion1, criterion2, criterion3, criterion4,
                                criterion5, criterion6, criterion7};
  std::vector<int> selected;
  if (argc > 1) {
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > 7) {
      std::fprintf(stderr, "usage: %s [1-7]\n", argv[0]);
      return 2;
    }
    selected.push_back(n);
  } else {
    for (int n = 1; n <= 7; ++n) selected.push_back(n);
  }

  int failures = 0;
  for (int n : selected) {
    Gate g;
    try {
      g = criteria[n - 1]();
    } catch (const std::exception& e) {
      g.ok = false;
      g.note(std::string("exception: ") + e.what());
    }
    std::printf("criterion %d %s%s%s\n", n, g.ok ? "PASS" : "FAIL",
                g.detail.empty() ? "" : ": ", g.detail.c_str());
    failures += !g.ok;
  }
  return failures == 0 ? 0 : 1;
}
