#include "srp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "srp/errors.hpp"

namespace srp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::int64_t CycleSample::count_of(std::int64_t j) const {
  for (const auto& [len, mult] : counts)
    if (len == j) return mult;
  return 0;
}

// ---------------------------------------------------------------------------
// First-cycle law

std::vector<double> first_cycle_pmf(const WeightTable& weights, const PartitionTable& table,
                                    std::int64_t n) {
  if (n < 1 || n > weights.size() || n > table.size())
    throw parameter_error("sampler: pmf size exceeds the tables");
  const double log_h_n = table.at(n);
  if (log_h_n == -kInf)
    throw undefined_model_error("sampler: H_n = 0, the first-cycle law is undefined");
  const double log_n = std::log(static_cast<double>(n));

  std::vector<double> p(static_cast<size_t>(n), 0.0);
  double total = 0.0;
  for (std::int64_t j = 1; j <= n; ++j) {
    double w = weights.at(j);
    double log_h_rest = table.at(n - j);
    if (w <= 0.0 || log_h_rest == -kInf) continue;
    double v = std::exp(std::log(w) - log_n + log_h_rest - log_h_n);
    p[static_cast<size_t>(j - 1)] = v;
    total += v;
  }
  if (std::fabs(total - 1.0) > 1e-10)
    throw numeric_error("sampler: first-cycle law failed its normalization check");
  for (double& v : p) v /= total;
  return p;
}

// ---------------------------------------------------------------------------
// Sequential cycle sampling

namespace {

std::int64_t draw_next_length(std::span<const double> log_w, const PartitionTable& table,
                              std::int64_t n, RngStream& rng) {
  const double log_h_n = table.at(n);
  if (log_h_n == -kInf)
    throw undefined_model_error("sampler: H_n = 0 encountered while sampling");
  const double base = -std::log(static_cast<double>(n)) - log_h_n;
  const double u = rng.uniform();
  double cum = 0.0;
  std::int64_t last_positive = 0;
  for (std::int64_t j = 1; j <= n; ++j) {
    double lw = log_w[static_cast<size_t>(j - 1)];
    double log_h_rest = table.at(n - j);
    if (lw == -kInf || log_h_rest == -kInf) continue;
    cum += std::exp(lw + base + log_h_rest);
    last_positive = j;
    if (cum >= u) return j;
  }
  if (last_positive == 0)
    throw undefined_model_error("sampler: no admissible cycle length at size n");
  return last_positive;  // roundoff left a sliver below 1
}

}  // namespace

CycleSample sample_cycle_lengths(const WeightTable& weights, const PartitionTable& table,
                                 RngStream& rng) {
  const std::int64_t n_total = weights.size();
  if (table.size() < n_total) throw parameter_error("sampler: partition table too short");
  std::vector<double> log_w(static_cast<size_t>(n_total));
  for (std::int64_t j = 1; j <= n_total; ++j) {
    double w = weights.at(j);
    log_w[static_cast<size_t>(j - 1)] = (w > 0.0) ? std::log(w) : -kInf;
  }
  CycleSample sample;
  sample.seed = rng.seed();
  sample.replica = rng.replica();
  std::int64_t remaining = n_total;
  while (remaining > 0) {
    std::int64_t j = draw_next_length(log_w, table, remaining, rng);
    sample.ordered.push_back(j);
    remaining -= j;
  }
  sample.sorted = sample.ordered;
  std::sort(sample.sorted.begin(), sample.sorted.end(), std::greater<>());
  std::map<std::int64_t, std::int64_t> counter;
  for (std::int64_t j : sample.ordered) ++counter[j];
  sample.counts.assign(counter.begin(), counter.end());
  return sample;
}

// ---------------------------------------------------------------------------
// Positions: winding vector + Gaussian bridge per cycle

namespace {

// discrete law p(k) ~ exp(-b k^2) on Z, truncated at relative mass 1e-12
std::int64_t draw_axis_winding(double b, RngStream& rng) {
  std::int64_t kmax = static_cast<std::int64_t>(std::floor(std::sqrt(27.7 / b))) + 1;
  double z = 1.0;
  for (std::int64_t k = 1; k <= kmax; ++k) z += 2.0 * std::exp(-b * k * k);
  double u = rng.uniform() * z;
  double cum = 1.0;
  if (u <= cum) return 0;
  for (std::int64_t k = 1; k <= kmax; ++k) {
    double w = std::exp(-b * k * k);
    cum += w;
    if (u <= cum) return k;
    cum += w;
    if (u <= cum) return -k;
  }
  return 0;
}

}  // namespace

PositionSample sample_positions(const ModelParams& params,
                                std::span<const std::int64_t> cycle_lengths, RngStream& rng) {
  const JumpDensity& den = params.density;
  if (!den.is_gaussian())
    throw domain_error("sampler: positions are sampled for Gaussian jump densities only");
  const int d = den.dim();
  const double L = params.side;
  const SymMatrix& cov = den.covariance();
  const SymMatrix& a_mat = den.sqrt_covariance();
  const bool diagonal = den.has_diagonal_covariance();
  std::vector<double> diag = cov.diagonal_values();
  SymMatrix cov_inv = cov.inverse_spd();

  PositionSample out;
  out.dim = d;
  std::int64_t total = 0;
  for (std::int64_t len : cycle_lengths) total += len;
  out.coords.reserve(static_cast<size_t>(total) * d);
  out.cycle.reserve(static_cast<size_t>(total));

  std::vector<double> wind(static_cast<size_t>(d));
  std::vector<double> z(static_cast<size_t>(d));
  for (std::int32_t c = 0; c < static_cast<std::int32_t>(cycle_lengths.size()); ++c) {
    const std::int64_t len = cycle_lengths[static_cast<size_t>(c)];
    const double jd = static_cast<double>(len);

    // winding vector k with probability ~ exp(-L^2 k^T cov^{-1} k / (2 j))
    if (diagonal) {
      for (int i = 0; i < d; ++i)
        wind[static_cast<size_t>(i)] = static_cast<double>(
            draw_axis_winding(L * L / (2.0 * jd * diag[static_cast<size_t>(i)]), rng));
    } else {
      // enumerate the ellipsoid and invert the cdf on the flattened list
      std::vector<double> ev;
      SymMatrix vec;
      cov_inv.eigen_sym(ev, vec);
      double lam_min_inv = ev.front();
      std::int64_t kmax =
          static_cast<std::int64_t>(std::floor(std::sqrt(2.0 * jd * 27.7 / (L * L * lam_min_inv)))) + 1;
      std::vector<std::vector<double>> pts;
      std::vector<double> mass;
      std::vector<double> k(static_cast<size_t>(d), 0.0);
      double zsum = 0.0;
      std::function<void(int)> rec = [&](int axis) {
        if (axis == d) {
          double q = cov_inv.quad_form(k);
          double m = std::exp(-L * L * q / (2.0 * jd));
          if (m > 0.0) {
            pts.push_back(k);
            mass.push_back(m);
            zsum += m;
          }
          return;
        }
        for (std::int64_t v = -kmax; v <= kmax; ++v) {
          k[static_cast<size_t>(axis)] = static_cast<double>(v);
          rec(axis + 1);
        }
      };
      rec(0);
      double u = rng.uniform() * zsum;
      double cum = 0.0;
      size_t pick = 0;
      for (size_t i = 0; i < mass.size(); ++i) {
        cum += mass[i];
        if (u <= cum) {
          pick = i;
          break;
        }
      }
      wind = pts[pick];
    }
    out.windings.push_back(wind);

    // i.i.d. steps conditioned on their sum: g_i - (mean g - L k / j)
    std::vector<double> steps(static_cast<size_t>(len) * d);
    std::vector<double> sum(static_cast<size_t>(d), 0.0);
    for (std::int64_t i = 0; i < len; ++i) {
      for (int q = 0; q < d; ++q) z[static_cast<size_t>(q)] = rng.normal();
      std::vector<double> g = a_mat.mat_vec(z);
      for (int q = 0; q < d; ++q) {
        steps[static_cast<size_t>(i) * d + q] = g[static_cast<size_t>(q)];
        sum[static_cast<size_t>(q)] += g[static_cast<size_t>(q)];
      }
    }
    for (std::int64_t i = 0; i < len; ++i)
      for (int q = 0; q < d; ++q)
        steps[static_cast<size_t>(i) * d + q] -=
            (sum[static_cast<size_t>(q)] - L * wind[static_cast<size_t>(q)]) / jd;
    double residual = 0.0;
    for (int q = 0; q < d; ++q) {
      double s = 0.0;
      for (std::int64_t i = 0; i < len; ++i) s += steps[static_cast<size_t>(i) * d + q];
      residual = std::max(residual, std::fabs(s - L * wind[static_cast<size_t>(q)]));
    }
    out.bridge_residual.push_back(residual);

    // uniform start, wrap the partial sums into [0, L)^d
    std::vector<double> pos(static_cast<size_t>(d));
    for (int q = 0; q < d; ++q) pos[static_cast<size_t>(q)] = L * rng.uniform();
    for (std::int64_t i = 0; i < len; ++i) {
      for (int q = 0; q < d; ++q) {
        double x = pos[static_cast<size_t>(q)];
        out.coords.push_back(x);
      }
      out.cycle.push_back(c);
      for (int q = 0; q < d; ++q) {
        double x = pos[static_cast<size_t>(q)] + steps[static_cast<size_t>(i) * d + q];
        x = std::fmod(x, L);
        if (x < 0.0) x += L;
        pos[static_cast<size_t>(q)] = x;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Modified stick breaking

StickSample sample_stick_breaking(double theta, double tau, int steps, RngStream& rng) {
  if (!(theta > 0.0)) throw parameter_error("sampler: theta must be positive");
  if (!(tau >= 0.0 && tau < 1.0)) throw parameter_error("sampler: tau must lie in [0, 1)");
  if (steps < 1) throw parameter_error("sampler: need at least one stick step");
  StickSample out;
  out.tau = tau;
  out.x.reserve(static_cast<size_t>(steps));
  out.s.reserve(static_cast<size_t>(steps));
  double s = 0.0;
  for (int k = 0; k < steps; ++k) {
    double u = rng.uniform();
    double beta = 1.0 - std::pow(1.0 - rng.uniform(), 1.0 / theta);  // Beta(1, theta)
    bool broke = u < 1.0 - tau / (1.0 - s);
    double x = broke ? (1.0 - s - tau) * beta : 0.0;
    s += x;
    out.x.push_back(x);
    out.s.push_back(s);
  }
  return out;
}

std::vector<double> rearrange_decreasing(std::vector<double> values) {
  for (double v : values)
    if (!(v >= 0.0)) throw parameter_error("sampler: rearrangement expects nonnegative values");
  std::stable_sort(values.begin(), values.end(), std::greater<>());
  return values;
}

}  // namespace srp
