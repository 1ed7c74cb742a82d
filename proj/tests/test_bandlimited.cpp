#include <doctest.h>

#include <cmath>
#include <vector>

#include "bandgap/bandlimited.hpp"

using namespace bandgap;

namespace {

bandlimited::Params params(double A, double B, double beta, double eps) {
  bandlimited::Params p;
  p.A = A;
  p.B = B;
  p.beta = beta;
  p.epsilon = eps;
  return p;
}

// trapezoid oracle for int_{-R}^{R} dxi / (4 pi^2 A xi^2 + theta^2)
double cutoff_integral(double theta, const bandlimited::Params& p, std::size_t n = 400001) {
  const double R = p.cutoff();
  const double h = 2.0 * R / (n - 1);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = -R + h * i;
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    s += w / (4.0 * pi * pi * p.A * xi * xi + theta * theta);
  }
  return s * h;
}

}  // namespace

TEST_SUITE_BEGIN("bandlimited");

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(params(1.0, 1.0, 1.0, 0.1).validate());
  CHECK_THROWS_AS(params(-1.0, 1.0, 1.0, 0.1).validate(), ConfigError);
  CHECK_THROWS_AS(params(1.0, 0.0, 1.0, 0.1).validate(), ConfigError);
  CHECK_THROWS_AS(params(1.0, 1.0, 1.0, 1.5).validate(), ConfigError);
  CHECK(params(1.0, 1.0, 2.0, 0.1).cutoff() == doctest::Approx(100.0).epsilon(1e-14));
}

TEST_CASE("root condition closed form matches quadrature") {
  const auto p = params(2.0, 1.5, 1.0, 0.2);
  for (double theta : {0.3, 0.6, 1.2}) {
    const double closed = bandlimited::theta_condition(theta, p);
    const double oracle = 1.0 - p.B * cutoff_integral(theta, p);
    CHECK(closed == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("root condition is strictly increasing in theta") {
  const auto p = params(1.0, 1.0, 1.0, 0.1);
  double prev = bandlimited::theta_condition(0.05, p);
  for (double theta = 0.1; theta < 3.0; theta += 0.05) {
    const double cur = bandlimited::theta_condition(theta, p);
    CHECK(cur > prev);
    prev = cur;
  }
  CHECK_THROWS_AS(bandlimited::theta_condition(0.0, p), ConfigError);
}

TEST_CASE("theta0 approaches B / (2 sqrt A) as the cutoff grows") {
  // A = 1, B = 2 puts the infinite-cutoff root exactly at 1
  const auto sol = bandlimited::theta0_solve(params(1.0, 2.0, 2.0, 1e-3));
  CHECK(sol.theta0 == doctest::Approx(1.0).epsilon(1e-6));
  for (double A : {0.5, 2.0})
    for (double B : {0.7, 1.3}) {
      const auto s = bandlimited::theta0_solve(params(A, B, 2.0, 1e-3));
      CHECK(s.theta0 == doctest::Approx(B / (2.0 * std::sqrt(A))).epsilon(1e-4));
    }
}

TEST_CASE("theta0 grows with the cutoff radius") {
  const double t1 = bandlimited::theta0_solve(params(1.0, 1.0, 1.0, 0.3)).theta0;
  const double t2 = bandlimited::theta0_solve(params(1.0, 1.0, 1.0, 0.1)).theta0;
  CHECK(t2 > t1);
}

TEST_CASE("residual and reciprocal-bound slack over the parameter grid") {
  for (double A : {0.5, 1.0, 2.0})
    for (double B : {0.5, 1.0, 2.0})
      for (double beta : {0.5, 1.0, 2.0})
        for (double eps : {0.2, 0.1, 0.05}) {
          const auto sol = bandlimited::theta0_solve(params(A, B, beta, eps));
          CHECK(sol.residual <= 1e-12);
          CHECK(sol.bound_slack > 0.0);
        }
}

TEST_CASE("kernel_hat is even with compact support") {
  const auto sol = bandlimited::theta0_solve(params(1.0, 1.0, 1.0, 0.2));
  CHECK(sol.kernel_hat(1.3) == doctest::Approx(sol.kernel_hat(-1.3)).epsilon(1e-15));
  CHECK(sol.kernel_hat(sol.params.cutoff()) == 0.0);
  CHECK(sol.kernel_hat(0.0) == doctest::Approx(1.0 / (sol.theta0 * sol.theta0)).epsilon(1e-15));
}

TEST_CASE("real-space kernel: evenness and the value at zero") {
  const auto sol = bandlimited::theta0_solve(params(1.0, 1.0, 1.0, 0.05));
  const auto f0 = bandlimited::kernel_realspace(sol, 20.0, 0.05);
  const std::size_t J = f0.size() / 2;
  CHECK(f0.x_at(J) == doctest::Approx(0.0).epsilon(1e-15));
  double even_defect = 0.0;
  for (std::size_t i = 0; i < f0.size(); ++i)
    even_defect = std::max(even_defect,
                           std::abs(f0.values[i].real() - f0.values[f0.size() - 1 - i].real()));
  CHECK(even_defect <= 1e-12);
  CHECK(f0.max_imag() <= 1e-12);
  // the root condition makes f0(0) = int kernel_hat = 1/B
  CHECK(f0.values[J].real() == doctest::Approx(1.0 / sol.params.B).epsilon(1e-4));
}

TEST_CASE("kernel profile approaches the point-well resolvent") {
  const auto sol = bandlimited::theta0_solve(params(1.0, 1.0, 1.0, 1e-3));
  const auto f0 = bandlimited::kernel_realspace(sol, 20.0, 0.05);
  CHECK(bandlimited::kernel_profile_distance(f0, sol.params) <= 1e-2);
}

TEST_CASE("profile distance decays like the cutoff inverse") {
  const double beta = 1.0;
  std::vector<double> eps_grid{0.2, 0.1, 0.05, 0.025};
  std::vector<double> dist;
  for (double eps : eps_grid) {
    const auto sol = bandlimited::theta0_solve(params(1.0, 1.0, beta, eps));
    const auto f0 = bandlimited::kernel_realspace(sol, 20.0, 0.05);
    dist.push_back(bandlimited::kernel_profile_distance(f0, sol.params));
  }
  CHECK(loglog_slope(eps_grid, dist) >= 0.8 * beta);
}

TEST_CASE("sampled kernel annihilates the operator to 1e-8") {
  const auto sol = bandlimited::theta0_solve(params(1.0, 1.0, 1.0, 0.2));
  const double R = sol.params.cutoff();
  const std::size_t m = 20000;
  SampledFunction fhat;
  fhat.x0 = -R;
  fhat.dx = R / static_cast<double>(m);
  fhat.values.resize(2 * m + 1);
  for (std::size_t i = 0; i < fhat.values.size(); ++i)
    fhat.values[i] = sol.kernel_hat(fhat.x_at(i) * (1.0 - 1e-15));
  const auto out = bandlimited::apply_L0(sol.theta0, fhat, sol.params);
  double resid = 0.0;
  for (const auto& v : out) resid = std::max(resid, std::abs(v));
  CHECK(resid <= 1e-8 * fhat.max_abs());
}

TEST_CASE("apply_L0 rejects a grid that misses the cutoff") {
  const auto sol = bandlimited::theta0_solve(params(1.0, 1.0, 1.0, 0.2));
  SampledFunction fhat;
  fhat.x0 = -1.0;
  fhat.dx = 0.1;
  fhat.values.assign(21, cplx{1.0, 0.0});
  CHECK_THROWS_AS(bandlimited::apply_L0(sol.theta0, fhat, sol.params), ConfigError);
}

TEST_SUITE_END();
