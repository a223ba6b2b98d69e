#ifndef SRP_PARTITION_HPP
#define SRP_PARTITION_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "srp/genfun.hpp"
#include "srp/weights.hpp"

namespace srp {

// log H_n for n = 0..N from the exact recursion
//   K H_K = sum_{i=0}^{K-1} W_{L,K-i} H_i,   H_0 = 1.
// Entries may be -inf for degenerate models (all contributing weights zero).
struct PartitionTable {
  std::vector<double> log_h;  // index n
  double tilt = 1.0;          // internal tilt used by the fast path (diagnostic)
  bool fast_path = false;
  std::vector<std::int64_t> degenerate;  // n with H_n = 0

  std::int64_t size() const { return static_cast<std::int64_t>(log_h.size()) - 1; }
  double at(std::int64_t n) const { return log_h[static_cast<size_t>(n)]; }
};

// forced_tilt <= 0 picks the tilt automatically. A tilt of exactly 1 runs the
// plain recursion untilted (still guarded and cross-checked).
PartitionTable make_partition_table(const WeightTable& weights, double forced_tilt = 0.0);

// Taylor coefficients of exp(sum_j a_j z^j / j) up to degree n_max (<= 64),
// by direct power-series exponentiation. Small-scale reference for the
// recursion above.
std::vector<double> polya_coefficients(std::span<const double> a, int n_max);

// E(t^{#cycles}) = H_N at weights scaled by t over H_N, using the linearity
// of the weights in theta.
double cycles_pgf(const WeightTable& weights, const PartitionTable& table, double t);

// ---------------------------------------------------------------------------
// Asymptotic approximations to log H_{N-j}(L), one per regime.

// sub-critical saddle form: exp(G_L(r_N)) / (r_N^{N-j} sqrt(2 pi a_N))
double log_h_subcritical(const ModelParams& params, const SaddleInfo& saddle, std::int64_t j);

// super-critical singular form: e^{F_L(1)} N^{theta-1} (1-tau-j/N)^{theta-1} / Gamma(theta)
double log_h_supercritical(const ModelParams& params, std::int64_t j, double tau);

// critical, d >= 5: e^{F_L(1)} N^{(theta-1)/2} (g''(1)/(2g'(1)) + 1/2)^{(theta-1)/2}
//                   / (2 Gamma((theta+1)/2))
double log_h_critical_highdim(const ModelParams& params, std::int64_t j);

// critical, d = 1 (rho ~ alpha sqrt(N)): C_0 e^{G_L(1-1/L^2)} boundary-series form
double log_h_critical_1d(const ModelParams& params, std::int64_t j);

}  // namespace srp

#endif
