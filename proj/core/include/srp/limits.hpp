#ifndef SRP_LIMITS_HPP
#define SRP_LIMITS_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "srp/spectral.hpp"

namespace srp {

// How the density scales with N in an experiment family.
struct RhoSpec {
  enum class Kind { Fixed, Power, Log };
  Kind kind = Kind::Fixed;
  double c = 1.0;  // coefficient
  double a = 0.0;  // exponent for rho = c N^a

  static RhoSpec fixed(double rho);
  static RhoSpec power(double c, double a);  // rho = c N^a, 0 < a <= 1
  static RhoSpec log_law(double c);          // rho = c log N

  double rho_at(double n) const;
};

enum class RegimeCase {
  SubConst,        // rho fixed, below critical (any d)
  Sub1,            // d=1, rho -> inf, rho = o(sqrt N)
  Sub2,            // d=2, rho ~ alpha log N, alpha < alpha_c
  Critical1D,      // d=1, rho ~ alpha sqrt N
  Critical2D,      // d=2, rho ~ alpha_c log N
  CriticalHighD,   // d>=3, rho = rho_c
  Super1,          // d=1, rho = omega(sqrt N)
  Super2,          // d=2, rho ~ alpha log N, alpha > alpha_c
  Hyper2,          // d=2, rho = omega(log N)
  Super3,          // d>=3, rho > rho_c
};

const char* regime_name(RegimeCase c);

struct Regime {
  RegimeCase kind = RegimeCase::SubConst;
  double tau = 0.0;    // fraction of points in small cycles (super-critical)
  double nu = 0.0;     // fraction of points in macroscopic cycles
  double alpha = 0.0;  // scale coefficient where the case carries one
};

Regime classify(int d, double theta, const JumpDensity& density, const RhoSpec& spec);

// Law of the first cycle length in the fixed-density regimes:
// P(Y = j) = theta rho^{-1} phi^{*j}(0) r_*^j.
struct YLawPrefix {
  std::vector<double> pmf;  // j = 1..j_max
  double prefix_mass = 0.0;
  double r_star = 0.0;
};
YLawPrefix y_pmf(const JumpDensity& density, double theta, double rho, std::int64_t j_max);

// Density of the one-dimensional critical limit of L_1/N on (0,1), and its
// normalizer Z.
double theta_density(double alpha, double sigma, double theta, double x);
double theta_density_normalizer(double alpha, double sigma, double theta);

// ---------------------------------------------------------------------------
// Reference limit laws with evaluable cdfs.

struct GammaHalfLaw {};       // Gamma(1/2, 1)
struct UniformLogScaleLaw {}; // U[0, 1]
struct ThetaDensityLaw {
  double alpha, sigma, theta;
};
struct DiscreteYLaw {
  std::vector<double> pmf;  // atoms at j = 1, 2, ...
  double r_star = 0.0;
};
struct X1Law {
  double theta = 1.0;
  double tau = 0.0;  // atom at zero
};

using LimitLaw =
    std::variant<GammaHalfLaw, UniformLogScaleLaw, ThetaDensityLaw, DiscreteYLaw, X1Law>;

double reference_cdf(const LimitLaw& law, double x);
// density where the law is continuous (throws for DiscreteYLaw)
double reference_density(const LimitLaw& law, double x);

}  // namespace srp

#endif
