#ifndef SRP_WEIGHTS_HPP
#define SRP_WEIGHTS_HPP

#include <cstdint>
#include <vector>

#include "srp/spectral.hpp"

namespace srp {

// One model instance: jump density, cycle tilt theta, torus side L, particle
// count N. The particle density rho = N / L^d drives every regime below.
struct ModelParams {
  JumpDensity density;
  double theta = 1.0;
  double side = 1.0;          // L
  std::int64_t particles = 1; // N

  int dim() const { return density.dim(); }
  double rho() const;

  static ModelParams with_side(JumpDensity density, double theta, double side,
                               std::int64_t particles);
  // L chosen so that N / L^d = rho (L >= 1 enforced)
  static ModelParams with_rho(JumpDensity density, double theta, double rho,
                              std::int64_t particles);
};

// Cycle weights W_{L,j} for j = 1..N plus the constant large-j limit theta.
struct WeightTable {
  ModelParams params;
  std::vector<double> w;    // w[j-1] = W_{L,j}
  double tail_value = 0.0;  // theta
  std::int64_t clamped = 0; // entries snapped up from tiny negative values

  std::int64_t size() const { return static_cast<std::int64_t>(w.size()); }
  double at(std::int64_t j) const { return w[static_cast<size_t>(j - 1)]; }
};

// W_{L,j} as the lattice sum of transform powers over (1/L) Z^d.
double cycle_weight(const ModelParams& params, std::int64_t j);

// The dual real-space lattice sum theta L^d sum_k phi^{*j}(L k); Gaussian only.
double cycle_weight_real_space(const ModelParams& params, std::int64_t j);

// Full table, switching representation at the j ~ L^2 crossover.
WeightTable make_weight_table(const ModelParams& params);

// rho_c = theta * sum_j phi^{*j}(0); +infinity for d <= 2.
double critical_density(const JumpDensity& density, double theta);

// alpha_c = theta / (2 pi sqrt(det cov)); defined for d = 2 only.
double critical_log_slope(const JumpDensity& density, double theta);

}  // namespace srp

#endif
