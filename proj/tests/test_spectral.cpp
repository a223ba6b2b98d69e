#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "srp/errors.hpp"
#include "srp/spectral.hpp"

using namespace srp;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> linspace(double a, double b, double step) {
  std::vector<double> out;
  for (double x = a; x <= b + 0.5 * step; x += step) out.push_back(x);
  return out;
}

// quartic-exponential test density, proportional to exp(-x^4)
JumpDensity quartic_density(double step = 1.0 / 256.0) {
  std::vector<double> grid = linspace(-8.0, 8.0, step);
  std::vector<double> values;
  values.reserve(grid.size());
  for (double x : grid) values.push_back(std::exp(-x * x * x * x));
  return JumpDensity::tabulated_1d(std::move(grid), std::move(values));
}

}  // namespace

TEST_CASE("gaussian construction caches covariance data") {
  JumpDensity d1 = make_gaussian_density(1, SymMatrix(1, {1.0}));
  CHECK(d1.sqrt_covariance()(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d1.det_covariance() == doctest::Approx(1.0).epsilon(1e-14));

  JumpDensity d2 = make_gaussian_density(2, SymMatrix::identity(2));
  CHECK(d2.det_covariance() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d2.sqrt_covariance()(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d2.sqrt_covariance()(0, 1) == doctest::Approx(0.0).epsilon(1e-14));

  CHECK_THROWS_AS(make_gaussian_density(1, SymMatrix(1, {-1.0})), parameter_error);
}

TEST_CASE("tabulated quartic density: mean zero, variance from quadrature oracle") {
  JumpDensity d = quartic_density();
  // oracle: Simpson quadrature of x^2 e^{-x^4} / e^{-x^4} at 8x resolution
  auto simpson = [](auto&& f, double a, double b, int n) {
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
  };
  double z = simpson([](double x) { return std::exp(-x * x * x * x); }, -8.0, 8.0, 1 << 15);
  double m2 =
      simpson([](double x) { return x * x * std::exp(-x * x * x * x); }, -8.0, 8.0, 1 << 15);
  double oracle_var = m2 / z;
  CHECK(oracle_var == doctest::Approx(std::tgamma(0.75) / std::tgamma(0.25)).epsilon(1e-9));
  CHECK(d.variance_1d() == doctest::Approx(oracle_var).epsilon(1e-8));
  CHECK(d.variance_1d() == doctest::Approx(0.337989).epsilon(1e-5));
}

TEST_CASE("tabulated gaussian matches the closed-form covariance") {
  double step = 1.0 / 512.0;
  std::vector<double> grid = linspace(-10.0, 10.0, step);
  std::vector<double> values;
  for (double x : grid) values.push_back(std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi));
  JumpDensity d = JumpDensity::tabulated_1d(std::move(grid), std::move(values));
  CHECK(d.variance_1d() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("tabulated rejects bad input") {
  std::vector<double> grid = linspace(-1.0, 1.0, 1.0 / 16.0);
  std::vector<double> zeros(grid.size(), 0.0);
  CHECK_THROWS_AS(JumpDensity::tabulated_1d(grid, zeros), parameter_error);

  std::vector<double> nonuniform = grid;
  nonuniform[3] += 0.01;
  std::vector<double> ones(grid.size(), 1.0);
  CHECK_THROWS_AS(JumpDensity::tabulated_1d(nonuniform, ones), parameter_error);

  std::vector<double> negative(grid.size(), 1.0);
  negative[0] = -0.5;
  CHECK_THROWS_AS(JumpDensity::tabulated_1d(grid, negative), parameter_error);
}

TEST_CASE("re-centering: shifted input ends up with zero mean") {
  double step = 1.0 / 256.0;
  std::vector<double> grid = linspace(-6.0, 10.0, step);
  std::vector<double> values;
  for (double x : grid) values.push_back(std::exp(-(x - 2.0) * (x - 2.0)));
  JumpDensity d = JumpDensity::tabulated_1d(std::move(grid), std::move(values));
  // after the shift the grid straddles zero and the first moment vanishes
  double mean = 0.0, mass = 0.0;
  for (size_t i = 0; i < d.grid().size(); ++i) {
    double w = (i == 0 || i + 1 == d.grid().size()) ? 0.5 : 1.0;
    mean += w * d.grid()[i] * d.values()[i];
    mass += w * d.values()[i];
  }
  CHECK(mean * d.grid_step() == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(mass * d.grid_step() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("char_fn: gaussian closed form and unit bound") {
  JumpDensity g = JumpDensity::gaussian_isotropic(1, 1.0);
  CHECK(g.char_fn_1d(0.0).real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.char_fn_1d(0.5).real() ==
        doctest::Approx(std::exp(-kPi * kPi / 2.0)).epsilon(1e-14));

  JumpDensity q = quartic_density();
  auto v0 = q.char_fn_1d(0.0);
  CHECK(v0.real() == doctest::Approx(1.0).epsilon(1e-12));
  auto v = q.char_fn_1d(0.1);
  CHECK(v.real() > 0.0);
  CHECK(v.real() < 1.0);
  CHECK(std::fabs(v.imag()) < 1e-9);

  for (double t : {0.05, 0.3, 0.9, 2.0, 5.0})
    CHECK(std::abs(q.char_fn_1d(t)) <= 1.0 + 1e-12);
}

TEST_CASE("conv_zero gaussian closed forms") {
  JumpDensity g1 = JumpDensity::gaussian_isotropic(1, 1.0);
  CHECK(conv_zero(g1, 1) == doctest::Approx(1.0 / std::sqrt(2.0 * kPi)).epsilon(1e-14));

  JumpDensity g2 = JumpDensity::gaussian_isotropic(2, 1.0);
  CHECK(conv_zero(g2, 4) == doctest::Approx(1.0 / (8.0 * kPi)).epsilon(1e-14));
}

TEST_CASE("conv_zero: closed form vs quadrature for gaussian densities") {
  // independent quadrature route: trapezoid of exp(-2 pi^2 j t^2) per axis
  auto quad_1d = [](double j) {
    double h = 1e-4 / std::sqrt(j);
    double s = 0.5;
    for (int k = 1;; ++k) {
      double t = k * h;
      double v = std::exp(-2.0 * kPi * kPi * j * t * t);
      s += v;
      if (v < 1e-19) break;
    }
    return 2.0 * s * h;
  };
  JumpDensity g1 = JumpDensity::gaussian_isotropic(1, 1.0);
  JumpDensity g3 = JumpDensity::gaussian_isotropic(3, 1.0);
  for (std::int64_t j : {1, 2, 3, 5, 17, 100, 1000}) {
    double q = quad_1d(static_cast<double>(j));
    CHECK(conv_zero(g1, j) == doctest::Approx(q).epsilon(1e-9));
    CHECK(conv_zero(g3, j) == doctest::Approx(q * q * q).epsilon(1e-9));
  }
}

TEST_CASE("conv_zero tabulated tracks the local clt envelope") {
  JumpDensity q = quartic_density();
  double sigma = std::sqrt(q.variance_1d());
  double prev_gap = 1e9;
  for (int e = 4; e <= 16; e += 3) {
    std::int64_t j = std::int64_t(1) << e;
    double ratio = conv_zero(q, j) * std::sqrt(2.0 * kPi * static_cast<double>(j)) * sigma;
    double gap = std::fabs(ratio - 1.0);
    CHECK(gap < 4.0 / std::sqrt(static_cast<double>(j)));
    CHECK(gap < prev_gap + 1e-12);
    prev_gap = gap;
  }
}

TEST_CASE("conv_zero_tail: dimension gate and brute-force remainder") {
  JumpDensity g2 = JumpDensity::gaussian_isotropic(2, 1.0);
  CHECK_THROWS_AS(conv_zero_tail(g2, 100), domain_error);

  JumpDensity g3 = JumpDensity::gaussian_isotropic(3, 1.0);
  // monotone decrease
  CHECK(conv_zero_tail(g3, 100) > conv_zero_tail(g3, 200));
  CHECK(conv_zero_tail(g3, 200) > conv_zero_tail(g3, 400));

  // brute partial sums of (2 pi j)^{-3/2} from 1e6 to 1e8, plus the plain
  // integral rest beyond 1e8 (no Euler-Maclaurin corrections: distinct route)
  const std::int64_t j0 = 1000000;
  const std::int64_t j1 = 100000000;
  double brute = 0.0;
  for (std::int64_t j = j1; j >= j0; --j)  // ascending magnitude
    brute += std::pow(2.0 * kPi * static_cast<double>(j), -1.5);
  brute += std::pow(2.0 * kPi, -1.5) * 2.0 / std::sqrt(static_cast<double>(j1));
  CHECK(conv_zero_tail(g3, j0) == doctest::Approx(brute).epsilon(0.01));
  CHECK(conv_zero_tail(g3, j0) == doctest::Approx(brute).epsilon(1e-4));
}

TEST_CASE("csv loader round-trips a density") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "srp_density_test.csv";
  {
    std::ofstream out(path);
    out << "x,value\n";
    char row[80];
    for (int k = -384; k <= 384; ++k) {
      double x = k / 64.0;
      std::snprintf(row, sizeof row, "%.17g,%.17g\n", x, std::exp(-x * x));
      out << row;
    }
  }
  JumpDensity d = JumpDensity::tabulated_1d_from_csv(path.string());
  CHECK(d.variance_1d() == doctest::Approx(0.5).epsilon(1e-6));  // var of N(0, 1/2)
  fs::remove(path);

  CHECK_THROWS_AS(JumpDensity::tabulated_1d_from_csv("/nonexistent/nope.csv"),
                  parameter_error);
}
