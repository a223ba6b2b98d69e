#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "srp/errors.hpp"
#include "srp/partition.hpp"

using namespace srp;

namespace {

ModelParams gauss_params(int d, double sigma2, double theta, double side, std::int64_t n) {
  return ModelParams::with_side(JumpDensity::gaussian_isotropic(d, sigma2), theta, side, n);
}

WeightTable synthetic_table(std::vector<double> w, double theta = 1.0) {
  WeightTable t;
  t.params = gauss_params(1, 1.0, theta, 1.0, static_cast<std::int64_t>(w.size()));
  t.tail_value = theta;
  t.w = std::move(w);
  return t;
}

// N! H_N by explicit enumeration of all permutations with per-cycle weights
double enumerate_weighted(const std::vector<double>& w, int n) {
  std::vector<int> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double total = 0.0;
  do {
    std::vector<bool> seen(static_cast<size_t>(n), false);
    double prod = 1.0;
    for (int i = 0; i < n; ++i) {
      if (seen[static_cast<size_t>(i)]) continue;
      int len = 0, j = i;
      while (!seen[static_cast<size_t>(j)]) {
        seen[static_cast<size_t>(j)] = true;
        j = perm[static_cast<size_t>(j)];
        ++len;
      }
      prod *= w[static_cast<size_t>(len - 1)];
    }
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

double factorial(int n) { return std::tgamma(static_cast<double>(n) + 1.0); }

}  // namespace

TEST_CASE("constant weights give a flat table") {
  WeightTable t = synthetic_table(std::vector<double>(40, 1.0));
  PartitionTable pt = make_partition_table(t);
  for (std::int64_t n = 0; n <= 40; ++n)
    CHECK(pt.at(n) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("first partition values expand the exponential") {
  WeightTable t = synthetic_table({0.7, 2.3, 0.4, 1.1});
  PartitionTable pt = make_partition_table(t);
  CHECK(std::exp(pt.at(1)) == doctest::Approx(0.7).epsilon(1e-13));
  CHECK(std::exp(pt.at(2)) == doctest::Approx((0.7 * 0.7 + 2.3) / 2.0).epsilon(1e-13));
}

TEST_CASE("recursion matches brute-force enumeration at small sizes") {
  for (auto [d, side, theta, sigma2] :
       std::vector<std::tuple<int, double, double, double>>{{1, 3.0, 1.5, 1.0},
                                                            {1, 2.0, 1.0, 0.5},
                                                            {2, 2.5, 0.7, 1.0},
                                                            {3, 1.5, 2.0, 1.0}}) {
    ModelParams p = ModelParams::with_side(JumpDensity::gaussian_isotropic(d, sigma2),
                                           theta, side, 7);
    WeightTable wt = make_weight_table(p);
    PartitionTable pt = make_partition_table(wt);
    for (int n = 2; n <= 7; ++n) {
      double brute = enumerate_weighted(wt.w, n);
      double log_ref = std::log(brute / factorial(n));
      CHECK(pt.at(n) == doctest::Approx(log_ref).epsilon(1e-11));
    }
  }
}

TEST_CASE("recursion matches enumeration for a sign-changing transform") {
  std::vector<double> grid, values;
  for (int k = -1024; k <= 1024; ++k) {
    double x = k / 128.0;
    grid.push_back(x);
    values.push_back(std::exp(-4.0 * std::pow(x - 3.0, 4.0)) +
                     std::exp(-4.0 * std::pow(x + 3.0, 4.0)));
  }
  ModelParams p = ModelParams::with_side(
      JumpDensity::tabulated_1d(std::move(grid), std::move(values)), 1.0, 2.0, 6);
  WeightTable wt = make_weight_table(p);
  PartitionTable pt = make_partition_table(wt);
  double log_fact = 0.0;
  for (int n = 1; n <= 6; ++n) {
    log_fact += std::log(static_cast<double>(n));
    double brute = enumerate_weighted(wt.w, n);
    CHECK(std::exp(pt.at(n) + log_fact) == doctest::Approx(brute).epsilon(1e-11));
  }
}

TEST_CASE("power-series exponential agrees with known coefficients") {
  // a_j = theta: coefficient n is theta (theta+1) ... (theta+n-1) / n!
  double theta = 1.7;
  std::vector<double> a(24, theta);
  std::vector<double> coeff = polya_coefficients(a, 20);
  double rising = 1.0;
  for (int n = 1; n <= 20; ++n) {
    rising *= theta + static_cast<double>(n - 1);
    CHECK(coeff[static_cast<size_t>(n)] ==
          doctest::Approx(rising / factorial(n)).epsilon(1e-12));
  }

  std::vector<double> zero(10, 0.0);
  std::vector<double> z = polya_coefficients(zero, 8);
  CHECK(z[0] == 1.0);
  for (size_t i = 1; i < z.size(); ++i) CHECK(z[i] == 0.0);

  CHECK_THROWS_AS(polya_coefficients(a, 100), parameter_error);
}

TEST_CASE("power-series route cross-checks the recursion") {
  ModelParams p = gauss_params(1, 1.0, 1.3, 4.0, 20);
  WeightTable wt = make_weight_table(p);
  PartitionTable pt = make_partition_table(wt);
  std::vector<double> coeff = polya_coefficients(wt.w, 20);
  for (int n = 1; n <= 20; ++n)
    CHECK(std::log(coeff[static_cast<size_t>(n)]) ==
          doctest::Approx(pt.at(n)).epsilon(1e-12));
}

TEST_CASE("fast path and log path agree, tilt choice does not matter") {
  ModelParams p = gauss_params(1, 1.0, 1.0, 5.0, 120);
  WeightTable wt = make_weight_table(p);
  PartitionTable fast = make_partition_table(wt);
  CHECK(fast.fast_path);
  PartitionTable other = make_partition_table(wt, 0.7);
  PartitionTable log_path = make_partition_table(wt, 1e-12);  // forces underflow bail
  CHECK_FALSE(log_path.fast_path);
  for (std::int64_t n = 0; n <= 120; n += 7) {
    CHECK(fast.at(n) == doctest::Approx(other.at(n)).epsilon(1e-12));
    CHECK(fast.at(n) == doctest::Approx(log_path.at(n)).epsilon(1e-10));
  }
}

TEST_CASE("degenerate weights record vanishing partition values") {
  WeightTable t = synthetic_table({0.0, 2.0, 0.0, 0.0});
  PartitionTable pt = make_partition_table(t);
  CHECK(pt.at(0) == 0.0);
  CHECK(pt.at(1) == -std::numeric_limits<double>::infinity());
  CHECK(std::exp(pt.at(2)) == doctest::Approx(1.0).epsilon(1e-13));  // W_2 / 2
  CHECK(pt.at(3) == -std::numeric_limits<double>::infinity());
  CHECK(std::exp(pt.at(4)) == doctest::Approx(0.5).epsilon(1e-13));  // W_2^2 / 8
  CHECK(pt.degenerate == std::vector<std::int64_t>{1, 3});
}

TEST_CASE("pgf: identity at t = 1, two-point value, monotone in t") {
  WeightTable pair = synthetic_table(std::vector<double>(2, 1.0));
  PartitionTable pt = make_partition_table(pair);
  CHECK(cycles_pgf(pair, pt, 1.0) == 1.0);
  CHECK(cycles_pgf(pair, pt, 2.0) == doctest::Approx(3.0).epsilon(1e-12));

  ModelParams p = gauss_params(1, 1.0, 1.0, 3.0, 30);
  WeightTable wt = make_weight_table(p);
  PartitionTable pt2 = make_partition_table(wt);
  double prev = 0.0;
  for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    double v = cycles_pgf(wt, pt2, t);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(cycles_pgf(wt, pt2, -1.0), parameter_error);
}

TEST_CASE("saddle approximation tracks the exact recursion (fixed density, d = 1)") {
  JumpDensity g1 = JumpDensity::gaussian_isotropic(1, 1.0);
  double prev_err = 1e9;
  for (std::int64_t n : {500, 2000}) {
    ModelParams p = ModelParams::with_rho(g1, 1.0, 1.0, n);
    WeightTable wt = make_weight_table(p);
    PartitionTable pt = make_partition_table(wt);
    SaddleInfo s = solve_saddle(p);
    double err = std::fabs(log_h_subcritical(p, s, 0) - pt.at(n));
    CHECK(err < prev_err);
    prev_err = err;

    // ratio structure: approx(j) - approx(j') = (j - j') log r exactly
    double d10 = log_h_subcritical(p, s, 10) - log_h_subcritical(p, s, 4);
    CHECK(d10 == doctest::Approx(6.0 * std::log(s.r)).epsilon(1e-12));
  }
  CHECK(prev_err < 0.05);

  ModelParams p = ModelParams::with_rho(g1, 1.0, 1.0, 1000);
  SaddleInfo s = solve_saddle(p);
  CHECK_THROWS_AS(log_h_subcritical(p, s, 900), domain_error);
}

TEST_CASE("singular approximation tracks the exact recursion (d = 3, above critical)") {
  JumpDensity g3 = JumpDensity::gaussian_isotropic(3, 1.0);
  double rho_c = critical_density(g3, 1.0);
  ModelParams p = ModelParams::with_rho(g3, 1.0, 2.0 * rho_c, 4000);
  WeightTable wt = make_weight_table(p);
  PartitionTable pt = make_partition_table(wt);
  double tau = 0.5;

  // theta = 1 kills the j-dependence of the prefactor
  CHECK(log_h_supercritical(p, 0, tau) ==
        doctest::Approx(log_h_supercritical(p, 700, tau)).epsilon(1e-12));

  double err = std::fabs(log_h_supercritical(p, 0, tau) - pt.at(4000));
  CHECK(err < 0.3);

  // at theta = 1 the exact tail ratio is flat as well
  double exact_ratio = pt.at(4000 - 400) - pt.at(4000);
  CHECK(std::fabs(exact_ratio) < 0.05);

  CHECK_THROWS_AS(log_h_supercritical(p, 3000, tau), domain_error);
}

TEST_CASE("high-dimensional critical approximation") {
  JumpDensity g5 = JumpDensity::gaussian_isotropic(5, 1.0);
  double rho_c = critical_density(g5, 1.0);
  ModelParams p = ModelParams::with_rho(g5, 1.0, rho_c, 2000);
  WeightTable wt = make_weight_table(p);
  PartitionTable pt = make_partition_table(wt);

  // theta = 1 collapses the constant to F_L(1) - log 2
  double expected = singular_part_at_one(p) - std::log(2.0);
  CHECK(log_h_critical_highdim(p, 0) == doctest::Approx(expected).epsilon(1e-10));

  // the gap closes slowly, roughly like N^{-1/10}
  double err = std::fabs(log_h_critical_highdim(p, 0) - pt.at(2000));
  CHECK(err < 0.4);

  // near-flat in j below N^{1/3}; the residual slope shrinks like N^{-1/6}
  std::int64_t jmax = static_cast<std::int64_t>(std::cbrt(2000.0));
  CHECK(std::fabs(pt.at(2000 - jmax) - pt.at(2000)) < 0.2);

  JumpDensity g3 = JumpDensity::gaussian_isotropic(3, 1.0);
  ModelParams p3 = ModelParams::with_rho(g3, 1.0, critical_density(g3, 1.0), 100);
  CHECK_THROWS_AS(log_h_critical_highdim(p3, 0), domain_error);
}

TEST_CASE("one-dimensional critical approximation") {
  JumpDensity g1 = JumpDensity::gaussian_isotropic(1, 1.0);
  const std::int64_t n = 2000;
  double alpha = 0.8;
  double rho = alpha * std::sqrt(static_cast<double>(n));
  ModelParams p = ModelParams::with_rho(g1, 1.0, rho, n);
  WeightTable wt = make_weight_table(p);
  PartitionTable pt = make_partition_table(wt);

  double err0 = std::fabs(log_h_critical_1d(p, 0) - pt.at(n));
  CHECK(err0 < 0.3);

  // log-ratio across j matches the exact recursion
  double approx_ratio = log_h_critical_1d(p, n / 2) - log_h_critical_1d(p, 0);
  double exact_ratio = pt.at(n - n / 2) - pt.at(n);
  CHECK(std::fabs(approx_ratio - exact_ratio) < 0.1);

  ModelParams p2 = gauss_params(2, 1.0, 1.0, 4.0, 100);
  CHECK_THROWS_AS(log_h_critical_1d(p2, 0), domain_error);
}
