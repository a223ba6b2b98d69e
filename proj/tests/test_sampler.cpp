#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "srp/errors.hpp"
#include "srp/sampler.hpp"
#include "srp/stats.hpp"

using namespace srp;

namespace {

ModelParams gauss_params(int d, double sigma2, double theta, double side, std::int64_t n) {
  return ModelParams::with_side(JumpDensity::gaussian_isotropic(d, sigma2), theta, side, n);
}

WeightTable ewens_table(std::int64_t n, double theta = 1.0) {
  WeightTable t;
  t.params = gauss_params(1, 1.0, theta, 1.0, n);
  t.tail_value = theta;
  t.w.assign(static_cast<size_t>(n), theta);
  return t;
}

// exact small-N law of (L1, L2) by enumeration; key (j1, j2), j2 = 0 when
// only one cycle exists
std::map<std::pair<int, int>, double> enumerate_first_two(const std::vector<double>& w, int n) {
  std::vector<int> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::map<std::pair<int, int>, double> law;
  double total = 0.0;
  do {
    std::vector<int> cycle_of(static_cast<size_t>(n), -1);
    std::vector<int> lengths;
    for (int i = 0; i < n; ++i) {
      if (cycle_of[static_cast<size_t>(i)] >= 0) continue;
      int len = 0, j = i;
      while (cycle_of[static_cast<size_t>(j)] < 0) {
        cycle_of[static_cast<size_t>(j)] = static_cast<int>(lengths.size());
        j = perm[static_cast<size_t>(j)];
        ++len;
      }
      lengths.push_back(len);
    }
    double prod = 1.0;
    for (int len : lengths) prod *= w[static_cast<size_t>(len - 1)];
    int j1 = lengths[0];
    int j2 = lengths.size() > 1 ? lengths[1] : 0;
    law[{j1, j2}] += prod;
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (auto& [key, v] : law) v /= total;
  return law;
}

}  // namespace

TEST_CASE("first-cycle law: trivial sizes and constant weights") {
  WeightTable t = ewens_table(8);
  PartitionTable pt = make_partition_table(t);
  std::vector<double> p1 = first_cycle_pmf(t, pt, 1);
  REQUIRE(p1.size() == 1);
  CHECK(p1[0] == doctest::Approx(1.0).epsilon(1e-14));

  std::vector<double> p8 = first_cycle_pmf(t, pt, 8);
  for (double v : p8) CHECK(v == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("first-cycle law equals enumeration at N = 6") {
  ModelParams p = gauss_params(1, 1.0, 1.0, 2.0, 6);
  WeightTable wt = make_weight_table(p);
  PartitionTable pt = make_partition_table(wt);
  std::vector<double> pmf = first_cycle_pmf(wt, pt, 6);

  auto law = enumerate_first_two(wt.w, 6);
  double tv = 0.0;
  for (int j = 1; j <= 6; ++j) {
    double marginal = 0.0;
    for (const auto& [key, v] : law)
      if (key.first == j) marginal += v;
    tv += std::fabs(marginal - pmf[static_cast<size_t>(j - 1)]);
  }
  CHECK(0.5 * tv < 1e-10);
}

TEST_CASE("sampled lengths partition N and replay deterministically") {
  ModelParams p = gauss_params(1, 1.0, 1.0, 3.0, 200);
  WeightTable wt = make_weight_table(p);
  PartitionTable pt = make_partition_table(wt);
  for (std::uint64_t rep = 0; rep < 40; ++rep) {
    RngStream rng(11, rep);
    CycleSample s = sample_cycle_lengths(wt, pt, rng);
    CHECK(std::accumulate(s.ordered.begin(), s.ordered.end(), std::int64_t(0)) == 200);
    CHECK(std::is_sorted(s.sorted.begin(), s.sorted.end(), std::greater<>()));
    std::int64_t by_counts = 0;
    for (auto [len, mult] : s.counts) by_counts += len * mult;
    CHECK(by_counts == 200);

    RngStream rng2(11, rep);
    CycleSample s2 = sample_cycle_lengths(wt, pt, rng2);
    CHECK(s.ordered == s2.ordered);
  }
}

TEST_CASE("empirical length-count identity: E(j C_j / N) = P(L1 = j)") {
  const std::int64_t n = 300;
  ModelParams p = gauss_params(1, 1.0, 1.0, 5.0, n);
  WeightTable wt = make_weight_table(p);
  PartitionTable pt = make_partition_table(wt);
  std::vector<double> pmf = first_cycle_pmf(wt, pt, n);

  const std::int64_t m = 20000;
  std::vector<CycleSample> samples;
  samples.reserve(static_cast<size_t>(m));
  for (std::int64_t rep = 0; rep < m; ++rep) {
    RngStream rng(23, static_cast<std::uint64_t>(rep));
    samples.push_back(sample_cycle_lengths(wt, pt, rng));
  }
  for (std::int64_t j = 1; j <= 10; ++j) {
    double mean = 0.0, sq = 0.0;
    for (const CycleSample& s : samples) {
      double v = static_cast<double>(j * s.count_of(j)) / static_cast<double>(n);
      mean += v;
      sq += v * v;
    }
    mean /= static_cast<double>(m);
    double se = std::sqrt((sq / m - mean * mean) / static_cast<double>(m));
    CHECK(std::fabs(mean - pmf[static_cast<size_t>(j - 1)]) < 4.0 * se + 1e-12);
  }
}

TEST_CASE("joint law of the first two cycles matches enumeration at N = 5") {
  ModelParams p = gauss_params(1, 1.0, 1.3, 2.0, 5);
  WeightTable wt = make_weight_table(p);
  PartitionTable pt = make_partition_table(wt);
  auto law = enumerate_first_two(wt.w, 5);

  const std::int64_t m = 1000000;
  std::map<std::pair<int, int>, double> empirical;
  for (std::int64_t rep = 0; rep < m; ++rep) {
    RngStream rng(31, static_cast<std::uint64_t>(rep));
    CycleSample s = sample_cycle_lengths(wt, pt, rng);
    int j1 = static_cast<int>(s.ordered[0]);
    int j2 = s.ordered.size() > 1 ? static_cast<int>(s.ordered[1]) : 0;
    empirical[{j1, j2}] += 1.0 / static_cast<double>(m);
  }
  for (const auto& [key, prob] : law) {
    double se = std::sqrt(prob * (1.0 - prob) / static_cast<double>(m));
    CHECK(std::fabs(empirical[key] - prob) < 4.0 * se + 2e-4);
  }
}

TEST_CASE("second-moment identity for pair counts") {
  // E[(j C_j / N)(j (C_j - 1) / (N - j))] = P(L1 = j, L2 = j)
  const std::int64_t n = 5;
  ModelParams p = gauss_params(1, 1.0, 1.3, 2.0, n);
  WeightTable wt = make_weight_table(p);
  PartitionTable pt = make_partition_table(wt);
  auto law = enumerate_first_two(wt.w, static_cast<int>(n));

  const std::int64_t m = 400000;
  const std::int64_t j = 2;
  double mean = 0.0, sq = 0.0;
  for (std::int64_t rep = 0; rep < m; ++rep) {
    RngStream rng(37, static_cast<std::uint64_t>(rep));
    CycleSample s = sample_cycle_lengths(wt, pt, rng);
    double cj = static_cast<double>(s.count_of(j));
    double v = (static_cast<double>(j) * cj / static_cast<double>(n)) *
               (static_cast<double>(j) * (cj - 1.0) / static_cast<double>(n - j));
    mean += v;
    sq += v * v;
  }
  mean /= static_cast<double>(m);
  double se = std::sqrt((sq / m - mean * mean) / static_cast<double>(m));
  double expected = law.count({2, 2}) ? law[{2, 2}] : 0.0;
  CHECK(std::fabs(mean - expected) < 4.0 * se + 1e-4);
}

TEST_CASE("positions: bridge constraint and uniform fixed points") {
  ModelParams p = gauss_params(2, 1.0, 1.0, 4.0, 64);
  RngStream rng(5, 0);
  std::vector<std::int64_t> lengths = {1, 3, 12, 48};
  PositionSample pos = sample_positions(p, lengths, rng);
  CHECK(pos.cycle.size() == 64);
  CHECK(pos.coords.size() == 128);
  for (double c : pos.coords) {
    CHECK(c >= 0.0);
    CHECK(c < 4.0);
  }
  CHECK(pos.windings.size() == lengths.size());
  for (double r : pos.bridge_residual) CHECK(r < 1e-9);
}

TEST_CASE("positions: a fixed point lands uniformly on the torus") {
  const double side = 4.0;
  ModelParams p = gauss_params(1, 1.0, 1.0, side, 1);
  std::vector<std::int64_t> one = {1};
  std::vector<double> xs;
  const int m = 50000;
  xs.reserve(m);
  for (int rep = 0; rep < m; ++rep) {
    RngStream rng(55, static_cast<std::uint64_t>(rep));
    PositionSample pos = sample_positions(p, one, rng);
    xs.push_back(pos.coords[0] / side);
  }
  EmpiricalSummary s = EmpiricalSummary::from_samples(std::move(xs));
  double ks = ks_distance(s, [](double x) { return std::min(1.0, std::max(0.0, x)); });
  CHECK(ks < 0.012);
}

TEST_CASE("positions: winding law matches the closed-form ratio") {
  // j = 4 L^2 puts visible mass on |k| = 1: P(k=1)/P(k=0) = exp(-L^2/(2 j))
  const double side = 3.0;
  const std::int64_t j = 36;
  ModelParams p = gauss_params(1, 1.0, 1.0, side, j);
  double ratio = std::exp(-side * side / (2.0 * static_cast<double>(j)));
  // normalizer over enumerated windings
  double z = 1.0;
  for (int k = 1; k <= 8; ++k) z += 2.0 * std::exp(-side * side * k * k / (2.0 * j));
  double expect_nonzero = (z - 1.0) / z;
  CHECK(expect_nonzero > 1e-3);

  const int m = 100000;
  std::vector<std::int64_t> lengths = {j};
  int nonzero = 0;
  for (int rep = 0; rep < m; ++rep) {
    RngStream rng(99, static_cast<std::uint64_t>(rep));
    PositionSample pos = sample_positions(p, lengths, rng);
    if (pos.windings[0][0] != 0.0) ++nonzero;
  }
  double se = std::sqrt(expect_nonzero * (1.0 - expect_nonzero) / m);
  CHECK(std::fabs(static_cast<double>(nonzero) / m - expect_nonzero) < 3.0 * se + 1e-3);
  CHECK(ratio == doctest::Approx(std::exp(-0.125)).epsilon(1e-12));

  std::vector<double> grid;
  std::vector<double> values;
  for (int k = -512; k <= 512; ++k) {
    grid.push_back(k / 64.0);
    values.push_back(std::exp(-std::pow(k / 64.0, 4.0)));
  }
  ModelParams non_gauss = ModelParams::with_side(
      JumpDensity::tabulated_1d(grid, values), 1.0, 4.0, 8);
  RngStream rng(1, 0);
  CHECK_THROWS_AS(sample_positions(non_gauss, lengths, rng), domain_error);
}

TEST_CASE("stick breaking: uniform first stick, mean partial sums, atom") {
  const int m = 100000;

  // tau = 0, theta = 1: X1 is uniform
  std::vector<double> first;
  first.reserve(m);
  for (int rep = 0; rep < m; ++rep) {
    RngStream rng(7, static_cast<std::uint64_t>(rep));
    StickSample s = sample_stick_breaking(1.0, 0.0, 1, rng);
    first.push_back(s.x[0]);
  }
  EmpiricalSummary summary = EmpiricalSummary::from_samples(std::move(first));
  double ks = ks_distance(summary, [](double x) { return std::min(1.0, std::max(0.0, x)); });
  CHECK(ks < 0.01);

  // tau = 0: E S_K = 1 - (theta/(theta+1))^K
  const int k_steps = 6;
  const double theta = 2.0;
  double mean = 0.0, sq = 0.0;
  for (int rep = 0; rep < m; ++rep) {
    RngStream rng(8, static_cast<std::uint64_t>(rep));
    StickSample s = sample_stick_breaking(theta, 0.0, k_steps, rng);
    mean += s.s.back();
    sq += s.s.back() * s.s.back();
  }
  mean /= m;
  double se = std::sqrt((sq / m - mean * mean) / m);
  double expected = 1.0 - std::pow(theta / (theta + 1.0), k_steps);
  CHECK(std::fabs(mean - expected) < 3.0 * se + 1e-4);

  // tau = 1/2: atom at zero with mass 1/2, partial sums capped at 1 - tau
  int zeros = 0;
  for (int rep = 0; rep < m; ++rep) {
    RngStream rng(9, static_cast<std::uint64_t>(rep));
    StickSample s = sample_stick_breaking(1.0, 0.5, 12, rng);
    if (s.x[0] == 0.0) ++zeros;
    CHECK(s.s.back() <= 0.5 + 1e-15);
    CHECK(std::is_sorted(s.s.begin(), s.s.end()));
  }
  double p0 = static_cast<double>(zeros) / m;
  CHECK(std::fabs(p0 - 0.5) < 3.0 * std::sqrt(0.25 / m) + 1e-4);

  RngStream bad_rng(1);
  CHECK_THROWS_AS(sample_stick_breaking(1.0, 1.0, 5, bad_rng), parameter_error);
}

TEST_CASE("stick breaking: remainder decays geometrically without an atom") {
  const int m = 2000;
  for (double theta : {1.0, 4.0}) {
    int slow = 0;
    for (int rep = 0; rep < m; ++rep) {
      RngStream rng(13, static_cast<std::uint64_t>(rep));
      StickSample s = sample_stick_breaking(theta, 0.0, 200, rng);
      if (1.0 - s.s.back() >= 1e-6) ++slow;
    }
    CHECK(static_cast<double>(slow) / m <= 0.01);
  }
}

TEST_CASE("rearrangement: sorting and tau-invariance of the top stick") {
  CHECK(rearrange_decreasing({0.1, 0.7, 0.2}) == std::vector<double>{0.7, 0.2, 0.1});
  std::vector<double> sorted = {0.5, 0.3, 0.2};
  CHECK(rearrange_decreasing(sorted) == sorted);

  const int m = 100000;
  auto top_component = [&](double tau, std::uint64_t seed) {
    std::vector<double> tops;
    tops.reserve(m);
    for (int rep = 0; rep < m; ++rep) {
      RngStream rng(seed, static_cast<std::uint64_t>(rep));
      StickSample s = sample_stick_breaking(1.0, tau, 200, rng);
      std::vector<double> arr = rearrange_decreasing(s.x);
      tops.push_back(arr[0] / (1.0 - tau));
    }
    return EmpiricalSummary::from_samples(std::move(tops));
  };
  EmpiricalSummary a = top_component(0.0, 41);
  EmpiricalSummary b = top_component(0.4, 43);
  CHECK(ks_two_sample(a, b) < 0.02);
}
