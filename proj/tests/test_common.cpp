#include <doctest.h>

#include <cmath>
#include <vector>

#include "bandgap/common.hpp"
#include "bandgap/csv.hpp"

using namespace bandgap;

TEST_SUITE_BEGIN("common");

TEST_CASE("trapezoid integrates a parabola exactly up to O(dx^2)") {
  const std::size_t n = 2001;
  std::vector<double> v(n);
  const double dx = 2.0 / (n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = -1.0 + dx * i;
    v[i] = x * x;
  }
  CHECK(trapezoid(std::span<const double>(v), dx) == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("fit_line recovers exact affine data") {
  std::vector<double> x{0.0, 1.0, 2.0, 5.0};
  std::vector<double> y;
  for (double xi : x) y.push_back(3.0 - 2.0 * xi);
  const auto fit = fit_line(x, y);
  CHECK(fit.intercept == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("loglog_slope recovers a power law") {
  std::vector<double> x{0.2, 0.1, 0.05, 0.025};
  std::vector<double> y;
  for (double xi : x) y.push_back(7.0 * xi * xi * xi);
  CHECK(loglog_slope(x, y) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("brillouin_grid covers (-1/2, 1/2] and hits both symmetry points") {
  const auto g = brillouin_grid(64);
  CHECK(g.size() == 64);
  CHECK(g.front() > -0.5);
  CHECK(g.back() == doctest::Approx(0.5));
  bool has_zero = false;
  for (double k : g) has_zero |= k == 0.0;
  CHECK(has_zero);
  CHECK_THROWS_AS(brillouin_grid(63), ConfigError);
}

TEST_CASE("wrap_bz is 1-periodic into (-1/2, 1/2]") {
  CHECK(wrap_bz(0.7) == doctest::Approx(-0.3));
  CHECK(wrap_bz(-0.5) == doctest::Approx(0.5));
  CHECK(wrap_bz(3.25) == doctest::Approx(0.25));
}

TEST_CASE("csv output is deterministic and round-trip exact") {
  csv::Writer w({"a", "b"});
  w.comment("config deadbeef");
  w.row({csv::cell(1.0 / 3.0), csv::cell(std::size_t{7})});
  const std::string s1 = w.str();
  CHECK(s1.find("# config deadbeef\n") == 0);
  CHECK(s1.find("a,b\n") != std::string::npos);
  const double back = std::stod(csv::cell(1.0 / 3.0));
  CHECK(back == 1.0 / 3.0);
}

TEST_SUITE_END();
