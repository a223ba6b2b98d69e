#include "srp/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "srp/errors.hpp"
#include "srp/rng.hpp"

namespace srp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

// log-domain recursion step: log H_K from log weights and earlier entries
double log_step(std::int64_t K, std::span<const double> log_w, std::span<const double> log_h) {
  double m = -kInf;
  for (std::int64_t i = 0; i < K; ++i) {
    double v = log_w[static_cast<size_t>(K - i - 1)] + log_h[static_cast<size_t>(i)];
    if (v > m) m = v;
  }
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (std::int64_t i = 0; i < K; ++i) {
    double v = log_w[static_cast<size_t>(K - i - 1)] + log_h[static_cast<size_t>(i)];
    if (v != -kInf) s += std::exp(v - m);
  }
  return m + std::log(s) - std::log(static_cast<double>(K));
}

// tilt x solving sum_j W_j x^j = N on (0,1]; 1 when even x = 1 cannot reach N
double pick_tilt(const WeightTable& wt) {
  const std::int64_t n = wt.size();
  auto value = [&](double x) {
    double s = 0.0, xp = x;
    for (std::int64_t j = 1; j <= n; ++j, xp *= x) s += wt.at(j) * xp;
    return s;
  };
  if (value(1.0) <= static_cast<double>(n)) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    (value(mid) < static_cast<double>(n) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

// ---------------------------------------------------------------------------
// Exact recursion

PartitionTable make_partition_table(const WeightTable& weights, double forced_tilt) {
  const std::int64_t n = weights.size();
  PartitionTable out;
  out.log_h.assign(static_cast<size_t>(n) + 1, 0.0);

  std::vector<double> log_w(static_cast<size_t>(n));
  for (std::int64_t j = 1; j <= n; ++j) {
    double w = weights.at(j);
    log_w[static_cast<size_t>(j - 1)] = (w > 0.0) ? std::log(w) : -kInf;
  }

  // fast path: plain arithmetic under a tilt x, valid while everything stays
  // inside the double range; cross-checked below on a sample of indices.
  double tilt = forced_tilt > 0.0 ? forced_tilt : pick_tilt(weights);
  double g_tilt = 0.0;
  {
    double xp = tilt;
    for (std::int64_t j = 1; j <= n; ++j, xp *= tilt)
      g_tilt += weights.at(j) * xp / static_cast<double>(j);
  }

  bool fast_ok = g_tilt <= 600.0;
  if (fast_ok) {
    std::vector<double> tw(static_cast<size_t>(n));  // W_j x^j
    double xp = tilt;
    for (std::int64_t j = 1; j <= n; ++j, xp *= tilt) tw[static_cast<size_t>(j - 1)] = weights.at(j) * xp;
    std::vector<double> th(static_cast<size_t>(n) + 1, 0.0);  // H_n x^n
    th[0] = 1.0;
    for (std::int64_t K = 1; K <= n && fast_ok; ++K) {
      double s = 0.0;
      const double* wv = tw.data();
      const double* hv = th.data();
      for (std::int64_t i = 0; i < K; ++i) s += wv[K - i - 1] * hv[i];
      s /= static_cast<double>(K);
      if (!std::isfinite(s) || s > 1e290 || (s != 0.0 && s < 1e-290)) fast_ok = false;
      th[static_cast<size_t>(K)] = s;
    }
    if (fast_ok) {
      double log_tilt = std::log(tilt);
      for (std::int64_t K = 0; K <= n; ++K) {
        double v = th[static_cast<size_t>(K)];
        out.log_h[static_cast<size_t>(K)] =
            (v > 0.0) ? std::log(v) - static_cast<double>(K) * log_tilt : -kInf;
      }
      // cross-check ~1% of rows against the log-domain step
      RngStream rng(0x5eed5eedULL);
      std::int64_t checks = std::max<std::int64_t>(1, n / 100);
      for (std::int64_t c = 0; c < checks && fast_ok; ++c) {
        std::int64_t K = 1 + static_cast<std::int64_t>(rng.uniform() * static_cast<double>(n));
        K = std::min(K, n);
        double ref = log_step(K, log_w, out.log_h);
        double got = out.log_h[static_cast<size_t>(K)];
        if (ref == -kInf || got == -kInf) {
          if (ref != got) fast_ok = false;
        } else if (std::fabs(ref - got) > 1e-9 * (1.0 + std::fabs(ref))) {
          fast_ok = false;
        }
      }
    }
    if (fast_ok) {
      out.tilt = tilt;
      out.fast_path = true;
      for (std::int64_t K = 1; K <= n; ++K)
        if (out.log_h[static_cast<size_t>(K)] == -kInf) out.degenerate.push_back(K);
      return out;
    }
  }

  // log-domain max-shift recursion
  out.tilt = 1.0;
  out.fast_path = false;
  out.log_h[0] = 0.0;
  for (std::int64_t K = 1; K <= n; ++K) {
    double v = log_step(K, log_w, out.log_h);
    out.log_h[static_cast<size_t>(K)] = v;
    if (v == -kInf) out.degenerate.push_back(K);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Power-series exponential (independent small-scale route)

std::vector<double> polya_coefficients(std::span<const double> a, int n_max) {
  if (n_max < 0 || n_max > 64)
    throw parameter_error("partition: polya_coefficients supports n_max <= 64");
  const size_t m = static_cast<size_t>(n_max) + 1;
  // A(z) = sum_{j>=1} a_j z^j / j, truncated
  std::vector<double> A(m, 0.0);
  for (size_t j = 1; j < m; ++j)
    if (j <= a.size()) A[j] = a[j - 1] / static_cast<double>(j);

  std::vector<double> result(m, 0.0), term(m, 0.0), next(m, 0.0);
  result[0] = 1.0;
  term[0] = 1.0;
  for (int k = 1; k <= n_max; ++k) {
    std::fill(next.begin(), next.end(), 0.0);
    for (size_t i = 0; i < m; ++i) {
      if (term[i] == 0.0) continue;
      for (size_t j = 1; i + j < m; ++j) next[i + j] += term[i] * A[j];
    }
    for (size_t i = 0; i < m; ++i) term[i] = next[i] / static_cast<double>(k);
    for (size_t i = 0; i < m; ++i) result[i] += term[i];
  }
  for (double v : result)
    if (!std::isfinite(v)) throw numeric_error("partition: polya_coefficients overflowed");
  return result;
}

// ---------------------------------------------------------------------------
// Number-of-cycles generating function

double cycles_pgf(const WeightTable& weights, const PartitionTable& table, double t) {
  if (!(t > 0.0)) throw parameter_error("partition: pgf argument must be positive");
  const std::int64_t n = weights.size();
  if (table.size() != n) throw parameter_error("partition: table sizes disagree");
  double log_h_n = table.at(n);
  if (log_h_n == -kInf)
    throw undefined_model_error("partition: H_N = 0, the model is undefined");
  if (t == 1.0) return 1.0;
  // weights are linear in theta, so the t-tilted model just scales the table
  WeightTable scaled = weights;
  scaled.tail_value *= t;
  scaled.params.theta *= t;
  for (double& w : scaled.w) w *= t;
  PartitionTable tilted = make_partition_table(scaled);
  return std::exp(tilted.at(n) - log_h_n);
}

// ---------------------------------------------------------------------------
// Asymptotic approximations

double log_h_subcritical(const ModelParams& params, const SaddleInfo& saddle, std::int64_t j) {
  const double n = static_cast<double>(params.particles);
  if (static_cast<double>(j) * static_cast<double>(j) > saddle.a / 10.0)
    throw domain_error("partition: saddle form needs j^2 = o(a_N)");
  return saddle.g0 - (n - static_cast<double>(j)) * std::log(saddle.r) -
         0.5 * std::log(2.0 * kPi * saddle.a);
}

double log_h_supercritical(const ModelParams& params, std::int64_t j, double tau) {
  const double n = static_cast<double>(params.particles);
  if (!(tau >= 0.0 && tau < 1.0)) throw parameter_error("partition: tau must lie in [0,1)");
  double slack = 1.0 - tau - static_cast<double>(j) / n;
  if (!(slack > 0.0))
    throw domain_error("partition: singular form needs j <= (1 - tau) N");
  double f1 = singular_part_at_one(params);
  return f1 + (params.theta - 1.0) * (std::log(n) + std::log(slack)) -
         std::lgamma(params.theta);
}

double log_h_critical_highdim(const ModelParams& params, std::int64_t j) {
  if (params.dim() < 5)
    throw domain_error("partition: high-dimensional critical form needs d >= 5");
  const double n = static_cast<double>(params.particles);
  if (static_cast<double>(j) > std::cbrt(n) + 1.0)
    throw domain_error("partition: high-dimensional critical form needs j <= N^(1/3)");
  double g1 = bulk_genfun_deriv(params.density, params.theta, 1, 1.0);
  double g2 = bulk_genfun_deriv(params.density, params.theta, 2, 1.0);
  double f1 = singular_part_at_one(params);
  double curvature = g2 / (2.0 * g1) + 0.5;
  return f1 + 0.5 * (params.theta - 1.0) * (std::log(n) + std::log(curvature)) -
         std::log(2.0) - std::lgamma(0.5 * (params.theta + 1.0));
}

double log_h_critical_1d(const ModelParams& params, std::int64_t j) {
  if (params.dim() != 1)
    throw domain_error("partition: boundary-series form is one-dimensional");
  const double n = static_cast<double>(params.particles);
  double frac = 1.0 - static_cast<double>(j) / n;
  if (!(frac > 0.0))
    throw domain_error("partition: boundary-series form needs j < N");
  double sigma = std::sqrt(params.density.variance_1d());
  double alpha = params.rho() / std::sqrt(n);
  double s = 1.0 / (2.0 * alpha * alpha * sigma * sigma * frac);
  double series_log = theta_law_series_log(params.theta, s);
  if (!std::isfinite(series_log))
    throw numeric_error("partition: boundary series underflowed for these parameters");
  double sqrt2_over_sigma = std::sqrt(2.0) / sigma;
  double log_c0 = sqrt2_over_sigma * params.theta +
                  2.0 * params.theta * std::log1p(-std::exp(-sqrt2_over_sigma)) -
                  0.5 * std::log(2.0 * kPi) - std::log(alpha * sigma);
  double g_near_one = genfun_deriv(params, 0, 1.0 - 1.0 / (params.side * params.side));
  return log_c0 + g_near_one - std::log(n) - 1.5 * std::log(frac) + series_log;
}

}  // namespace srp
