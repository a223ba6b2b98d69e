#ifndef SRP_STATS_HPP
#define SRP_STATS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "srp/sampler.hpp"

namespace srp {

struct EmpiricalSummary {
  std::vector<double> values;  // sorted nondecreasing
  std::int64_t zero_atoms = 0;

  static EmpiricalSummary from_samples(std::vector<double> samples);
  std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }
};

// One-sample Kolmogorov-Smirnov distance against a cdf, both one-sided gaps.
double ks_distance(const EmpiricalSummary& sample, const std::function<double(double)>& cdf);

// Distance between an exact lattice law (atoms[i] carrying pmf[i]) and a
// reference cdf, evaluated at the atom locations.
double ks_distance_pmf(std::span<const double> atoms, std::span<const double> pmf,
                       const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov distance.
double ks_two_sample(const EmpiricalSummary& a, const EmpiricalSummary& b);

// (1/2) sum |p - q| for two discrete laws of equal length.
double tv_discrete(std::span<const double> p, std::span<const double> q);

// Tail mass P(L_1 >= eps N) of a first-cycle law given as pmf over j = 1..N.
double macro_fraction(std::span<const double> pmf, double epsilon);

struct CycleCountStats {
  double mean = 0.0;      // mean of C_j / N
  double variance = 0.0;  // sample variance of C_j / N
  double mean_se = 0.0;
  double variance_se = 0.0;
};
CycleCountStats cycle_count_stats(std::span<const CycleSample> samples, std::int64_t j,
                                  std::int64_t n_particles);

}  // namespace srp

#endif
