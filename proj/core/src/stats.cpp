#include "srp/stats.hpp"

#include <algorithm>
#include <cmath>

#include "srp/errors.hpp"

namespace srp {

EmpiricalSummary EmpiricalSummary::from_samples(std::vector<double> samples) {
  if (samples.empty()) throw parameter_error("stats: empty sample");
  EmpiricalSummary s;
  std::sort(samples.begin(), samples.end());
  s.zero_atoms = std::count(samples.begin(), samples.end(), 0.0);
  s.values = std::move(samples);
  return s;
}

double ks_distance(const EmpiricalSummary& sample, const std::function<double(double)>& cdf) {
  const std::int64_t m = sample.size();
  if (m == 0) throw parameter_error("stats: empty sample");
  double d = 0.0;
  for (std::int64_t i = 0; i < m; ++i) {
    double f = cdf(sample.values[static_cast<size_t>(i)]);
    double lo = static_cast<double>(i) / static_cast<double>(m);
    double hi = static_cast<double>(i + 1) / static_cast<double>(m);
    d = std::max(d, std::max(f - lo, hi - f));
  }
  return std::min(1.0, d);
}

double ks_distance_pmf(std::span<const double> atoms, std::span<const double> pmf,
                       const std::function<double(double)>& cdf) {
  if (atoms.size() != pmf.size()) throw parameter_error("stats: atoms/pmf length mismatch");
  if (atoms.empty()) throw parameter_error("stats: empty law");
  double cum = 0.0;
  double d = 0.0;
  for (size_t i = 0; i < atoms.size(); ++i) {
    cum += pmf[i];
    d = std::max(d, std::fabs(cum - cdf(atoms[i])));
  }
  return std::min(1.0, d);
}

double ks_two_sample(const EmpiricalSummary& a, const EmpiricalSummary& b) {
  const std::int64_t na = a.size(), nb = b.size();
  if (na == 0 || nb == 0) throw parameter_error("stats: empty sample");
  double d = 0.0;
  std::int64_t i = 0, j = 0;
  while (i < na && j < nb) {
    double va = a.values[static_cast<size_t>(i)];
    double vb = b.values[static_cast<size_t>(j)];
    if (va <= vb) ++i;
    if (vb <= va) ++j;
    double fa = static_cast<double>(i) / static_cast<double>(na);
    double fb = static_cast<double>(j) / static_cast<double>(nb);
    d = std::max(d, std::fabs(fa - fb));
  }
  return d;
}

double tv_discrete(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw parameter_error("stats: tv_discrete length mismatch");
  double sp = 0.0, sq = 0.0, d = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    sp += p[i];
    sq += q[i];
    d += std::fabs(p[i] - q[i]);
  }
  if (std::fabs(sp - 1.0) > 1e-8 || std::fabs(sq - 1.0) > 1e-8)
    throw parameter_error("stats: tv_discrete arguments must sum to one");
  return 0.5 * d;
}

double macro_fraction(std::span<const double> pmf, double epsilon) {
  const std::int64_t n = static_cast<std::int64_t>(pmf.size());
  if (n == 0) throw parameter_error("stats: empty pmf");
  std::int64_t j0 = static_cast<std::int64_t>(std::ceil(epsilon * static_cast<double>(n)));
  j0 = std::max<std::int64_t>(j0, 1);
  double tail = 0.0;
  for (std::int64_t j = j0; j <= n; ++j) tail += pmf[static_cast<size_t>(j - 1)];
  return tail;
}

CycleCountStats cycle_count_stats(std::span<const CycleSample> samples, std::int64_t j,
                                  std::int64_t n_particles) {
  if (samples.empty()) throw parameter_error("stats: empty sample collection");
  const double n = static_cast<double>(n_particles);
  const double m = static_cast<double>(samples.size());
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (const CycleSample& s : samples) {
    double v = static_cast<double>(s.count_of(j)) / n;
    s1 += v;
    s2 += v * v;
    s3 += v * v * v;
    s4 += v * v * v * v;
  }
  CycleCountStats out;
  out.mean = s1 / m;
  double ex2 = s2 / m;
  out.variance = (m > 1.0) ? (ex2 - out.mean * out.mean) * m / (m - 1.0) : 0.0;
  out.mean_se = (m > 1.0) ? std::sqrt(std::max(0.0, out.variance) / m) : 0.0;
  // plug-in fourth-moment error bar for the variance estimate
  double mu = out.mean;
  double m2 = ex2 - mu * mu;
  double m4 = s4 / m - 4.0 * mu * s3 / m + 6.0 * mu * mu * ex2 - 3.0 * mu * mu * mu * mu;
  out.variance_se = (m > 1.0) ? std::sqrt(std::max(0.0, m4 - m2 * m2) / m) : 0.0;
  return out;
}

}  // namespace srp
