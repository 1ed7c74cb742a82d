#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "bandgap/harness.hpp"

using namespace bandgap;

namespace {

// free background with the single-cosine perturbation cos(2 pi x / eps) e^{-x^2}
const char* kFreeConfig = R"({
  "potential": {"fourier": []},
  "perturbation": {"mode": "two-scale", "epsilon": 0.2,
    "terms": [{"lambda": 1.0, "envelope": {"kind": "gaussian", "amp": 0.5, "width": 1.0}}]},
  "band": {"b_star": 0, "k_star": 0.0},
  "epsilon_grid": [0.2, 0.14]
})";

const char* kMathieuUpperEdge = R"({
  "potential": {"fourier": [[1, 1.0, 0.0]]},
  "perturbation": {"mode": "two-scale", "epsilon": 0.2,
    "terms": [{"lambda": 1.0, "envelope": {"kind": "gaussian", "amp": 0.5, "width": 1.0}}]},
  "band": {"b_star": 1, "k_star": 0.0},
  "epsilon_grid": [0.2]
})";

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path fresh_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("bandgap_test_" + tag);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("config parsing fills fields and solver overrides") {
  const auto cfg = harness::RunConfig::from_json_text(R"({
    "potential": {"fourier": [[1, 1.0, 0.0]]},
    "perturbation": {"terms": [{"lambda": 2.0, "envelope": {"kind": "dgaussian", "amp": 3.0, "width": 0.5}}]},
    "band": {"b_star": 2, "k_star": 0.0},
    "epsilon_grid": [0.2, 0.1],
    "solver": {"M": 48, "h_rule": 40.0, "workers": 3}
  })");
  CHECK(cfg.potential.max_mode() == 1);
  CHECK(cfg.b_star == 2);
  CHECK(cfg.epsilon_grid.size() == 2);
  CHECK(cfg.solver.M == 48);
  CHECK(cfg.solver.h_rule == 40.0);
  CHECK(cfg.solver.workers == 3);
  CHECK(cfg.solver.L_min == 30.0);  // untouched default
  REQUIRE(cfg.perturbation.terms.size() == 1);
  CHECK(cfg.perturbation.terms[0].envelope.kind == Envelope::Kind::DGaussian);
  CHECK(cfg.cutoff() >= 48);
}

TEST_CASE("config hash ignores formatting but not content") {
  const auto a = harness::RunConfig::from_json_text(kFreeConfig);
  std::string spaced(kFreeConfig);
  spaced.insert(1, "\n   \n");
  const auto b = harness::RunConfig::from_json_text(spaced);
  CHECK(a.hash == b.hash);
  CHECK(a.hash.size() == 16);
  std::string changed(kFreeConfig);
  const auto pos = changed.find("0.14");
  changed.replace(pos, 4, "0.15");
  CHECK(harness::RunConfig::from_json_text(changed).hash != a.hash);
}

TEST_CASE("bad configurations are configuration errors") {
  CHECK_THROWS_AS(harness::RunConfig::from_json_text("{not json"), ConfigError);
  CHECK_THROWS_AS(harness::RunConfig::from_json_text(R"({"epsilon_grid": []})"), ConfigError);
  CHECK_THROWS_AS(harness::RunConfig::from_json_text(R"({"epsilon_grid": [0.1, 0.2]})"),
                  ConfigError);
  CHECK_THROWS_AS(harness::RunConfig::from_json_text(R"({"epsilon_grid": [0.6, 0.2]})"),
                  ConfigError);
  CHECK_THROWS_AS(harness::RunConfig::from_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("prediction on the free background matches closed forms") {
  const auto cfg = harness::RunConfig::from_json_text(kFreeConfig);
  const auto pred = harness::predict(cfg);
  CHECK(pred.edge.E_star == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(pred.model.A_eff == doctest::Approx(1.0).epsilon(1e-6));
  // B_eff = 2 (1/2)^2 sqrt(pi/2) / (2 pi)^2
  const double b_oracle = 0.5 * std::sqrt(pi / 2.0) / (two_pi * two_pi);
  CHECK(pred.model.B_eff == doctest::Approx(b_oracle).epsilon(1e-8));
  CHECK(pred.b_eff_quad_error <= 1e-10);
  CHECK(pred.model.E2 ==
        doctest::Approx(-pred.model.B_eff * pred.model.B_eff / 4.0).epsilon(1e-10));
  CHECK(pred.gap_lo == -std::numeric_limits<double>::infinity());
}

TEST_CASE("an upper band edge refuses to build the point-well model") {
  const auto cfg = harness::RunConfig::from_json_text(kMathieuUpperEdge);
  CHECK_THROWS_AS(harness::predict(cfg), ConfigError);
}

TEST_CASE("single-epsilon validation accepts the free-background defect mode") {
  const auto cfg = harness::RunConfig::from_json_text(kFreeConfig);
  const auto pred = harness::predict(cfg);
  const auto row = harness::validate_one(cfg, pred, 0.2);
  REQUIRE(row.E_eps.has_value());
  CHECK(row.accepted);
  CHECK(*row.E_eps < 0.0);
  CHECK(row.ratio == doctest::Approx(1.0).epsilon(0.4));
  CHECK(row.residual <= 1e-6);
  CHECK(row.loc_len == doctest::Approx(row.loc_len_pred).epsilon(0.3));
  CHECK(row.profile_sup_err < 0.5);
}

TEST_CASE("parallel validation reproduces the serial rows in epsilon order") {
  auto cfg = harness::RunConfig::from_json_text(kFreeConfig);
  const auto serial = harness::validate(cfg);
  cfg.solver.workers = 2;
  const auto parallel = harness::validate(cfg);
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].eps == cfg.epsilon_grid[i]);
    REQUIRE(serial.rows[i].E_eps.has_value());
    REQUIRE(parallel.rows[i].E_eps.has_value());
    CHECK(*serial.rows[i].E_eps == *parallel.rows[i].E_eps);
  }
}

TEST_CASE("CSV output is bitwise deterministic and named by the config hash") {
  const auto cfg = harness::RunConfig::from_json_text(kFreeConfig);
  const auto dir = fresh_dir("csv");
  const auto p1 = harness::cmd_predict(cfg, dir.string());
  const auto body1 = slurp(p1);
  std::filesystem::remove(p1);
  const auto p2 = harness::cmd_predict(cfg, dir.string());
  CHECK(p1 == p2);
  CHECK(slurp(p2) == body1);
  CHECK(std::filesystem::path(p1).filename().string() == "predict_" + cfg.hash + ".csv");
  CHECK(body1.find("# config " + cfg.hash) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("band scan command writes the gap table header") {
  const auto cfg = harness::RunConfig::from_json_text(kMathieuUpperEdge);
  const auto dir = fresh_dir("bands");
  const auto path = harness::cmd_bands(cfg, dir.string());
  const auto body = slurp(path);
  CHECK(body.find("# gap 0 ") != std::string::npos);
  CHECK(body.find("k,band,energy\n") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_SUITE_END();
