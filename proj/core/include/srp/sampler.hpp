#ifndef SRP_SAMPLER_HPP
#define SRP_SAMPLER_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "srp/partition.hpp"
#include "srp/rng.hpp"
#include "srp/weights.hpp"

namespace srp {

// Cycle lengths of one sampled permutation.
struct CycleSample {
  std::vector<std::int64_t> ordered;  // discovery order, sums to N
  std::vector<std::int64_t> sorted;   // non-increasing rearrangement
  // (length, multiplicity) pairs, ascending in length
  std::vector<std::pair<std::int64_t, std::int64_t>> counts;
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;

  std::int64_t count_of(std::int64_t j) const;
  std::int64_t cycles() const { return static_cast<std::int64_t>(ordered.size()); }
};

// Law of the first cycle length at size n: p_j = (W_j / n) H_{n-j} / H_n.
std::vector<double> first_cycle_pmf(const WeightTable& weights, const PartitionTable& table,
                                    std::int64_t n);

// Draw all cycle lengths sequentially from the first-cycle law.
CycleSample sample_cycle_lengths(const WeightTable& weights, const PartitionTable& table,
                                 RngStream& rng);

// Particle positions given cycle lengths (Gaussian jump density only):
// per cycle a winding vector and a Gaussian bridge on the torus.
struct PositionSample {
  int dim = 0;
  std::vector<double> coords;        // particle-major, dim entries each
  std::vector<std::int32_t> cycle;   // cycle id per particle
  std::vector<std::vector<double>> windings;  // per cycle, in units of L
  std::vector<double> bridge_residual;  // per cycle: |sum of steps - L k|, ~0
};
PositionSample sample_positions(const ModelParams& params,
                                std::span<const std::int64_t> cycle_lengths, RngStream& rng);

// Modified stick breaking with unbreakable mass tau.
struct StickSample {
  std::vector<double> x;  // stick lengths, zeros allowed
  std::vector<double> s;  // partial sums
  double tau = 0.0;
};
StickSample sample_stick_breaking(double theta, double tau, int steps, RngStream& rng);

// Non-increasing rearrangement (stable).
std::vector<double> rearrange_decreasing(std::vector<double> values);

}  // namespace srp

#endif
