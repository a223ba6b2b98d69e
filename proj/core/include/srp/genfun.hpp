#ifndef SRP_GENFUN_HPP
#define SRP_GENFUN_HPP

#include <cstdint>

#include "srp/weights.hpp"

namespace srp {

// Saddle point of z G_L'(z) = N together with the curvature scales used by
// the coefficient asymptotics.
struct SaddleInfo {
  double r = 0.0;        // r_N in (0,1)
  double a = 0.0;        // a_N = r G' + r^2 G''
  double b = 0.0;        // b_N = r G' + 3 r^2 G'' + r^3 G'''
  double g0 = 0.0;       // G_L(r_N)
  double g1 = 0.0;       // G_L'(r_N)
  double g2 = 0.0;       // G_L''(r_N)
  double g3 = 0.0;       // G_L'''(r_N)
};

// n-th derivative of the finite-volume generating function
//   G_L(z) = sum_j W_{L,j} z^j / j
// evaluated by its lattice representation; n in {0,1,2,3}, 0 <= r < 1.
double genfun_deriv(const ModelParams& params, int n, double r);

// n-th derivative of the per-volume limit g(z) = sum_j theta phi^{*j}(0) z^j / j.
// r = 1 is admitted when the series still converges there (d > 2n; any d for n = 0).
double bulk_genfun_deriv(const JumpDensity& density, double theta, int n, double r);

SaddleInfo solve_saddle(const ModelParams& params);

// The unique r in (0,1] with theta * sum_j phi^{*j}(0) r^j = rho.
// Returns 1 exactly at the critical density (d >= 3).
double solve_r_star(const JumpDensity& density, double theta, double rho);

// F_L(1) = sum_j (W_{L,j} - theta)/j, summed to at least min_terms (default
// picks >= 8 L^2) with a geometric tail control.
double singular_part_at_one(const ModelParams& params, std::int64_t min_terms = 0);

// Same series evaluated directly from a finite weight table (no tail).
double singular_part_from_table(const WeightTable& table);

// Closed-form coth approximation to G_L'(r) in dimension one.
double genfun_coth_deriv_1d(const ModelParams& params, double r);

}  // namespace srp

#endif
