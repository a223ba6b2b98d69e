#include "srp/limits.hpp"

#include <cmath>

#include "srp/errors.hpp"
#include "srp/genfun.hpp"
#include "srp/weights.hpp"

namespace srp {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPiSq = 2.0 * kPi * kPi;
}

// ---------------------------------------------------------------------------
// RhoSpec

RhoSpec RhoSpec::fixed(double rho) {
  if (!(rho > 0.0)) throw parameter_error("limits: rho must be positive");
  return {Kind::Fixed, rho, 0.0};
}

RhoSpec RhoSpec::power(double c, double a) {
  if (!(c > 0.0)) throw parameter_error("limits: power-law coefficient must be positive");
  if (!(a > 0.0 && a <= 1.0))
    throw parameter_error("limits: power-law exponent must lie in (0, 1]");
  return {Kind::Power, c, a};
}

RhoSpec RhoSpec::log_law(double c) {
  if (!(c > 0.0)) throw parameter_error("limits: log-law coefficient must be positive");
  return {Kind::Log, c, 0.0};
}

double RhoSpec::rho_at(double n) const {
  switch (kind) {
    case Kind::Fixed: return c;
    case Kind::Power: return c * std::pow(n, a);
    default: return c * std::log(n);
  }
}

const char* regime_name(RegimeCase c) {
  switch (c) {
    case RegimeCase::SubConst: return "SubConst";
    case RegimeCase::Sub1: return "Sub1";
    case RegimeCase::Sub2: return "Sub2";
    case RegimeCase::Critical1D: return "Critical1D";
    case RegimeCase::Critical2D: return "Critical2D";
    case RegimeCase::CriticalHighD: return "CriticalHighD";
    case RegimeCase::Super1: return "Super1";
    case RegimeCase::Super2: return "Super2";
    case RegimeCase::Hyper2: return "Hyper2";
    default: return "Super3";
  }
}

// ---------------------------------------------------------------------------
// Regime classification

Regime classify(int d, double theta, const JumpDensity& density, const RhoSpec& spec) {
  if (d != density.dim()) throw parameter_error("limits: d does not match the density");
  if (!(theta > 0.0)) throw parameter_error("limits: theta must be positive");
  Regime out;

  if (d == 1) {
    switch (spec.kind) {
      case RhoSpec::Kind::Fixed:
        out.kind = RegimeCase::SubConst;
        return out;
      case RhoSpec::Kind::Log:
        out.kind = RegimeCase::Sub1;  // log growth is o(sqrt N)
        return out;
      case RhoSpec::Kind::Power:
        if (spec.a < 0.5) {
          out.kind = RegimeCase::Sub1;
        } else if (spec.a == 0.5) {
          out.kind = RegimeCase::Critical1D;
          out.alpha = spec.c;
          out.nu = 1.0;
        } else {
          out.kind = RegimeCase::Super1;
          out.nu = 1.0;
        }
        return out;
    }
  }

  if (d == 2) {
    double alpha_c = critical_log_slope(density, theta);
    switch (spec.kind) {
      case RhoSpec::Kind::Fixed:
        out.kind = RegimeCase::SubConst;
        return out;
      case RhoSpec::Kind::Power:
        out.kind = RegimeCase::Hyper2;  // any power beats log N
        out.nu = 1.0;
        return out;
      case RhoSpec::Kind::Log: {
        double alpha = spec.c;
        out.alpha = alpha;
        if (alpha < alpha_c * (1.0 - 1e-12)) {
          out.kind = RegimeCase::Sub2;
        } else if (alpha <= alpha_c * (1.0 + 1e-12)) {
          out.kind = RegimeCase::Critical2D;
        } else {
          out.kind = RegimeCase::Super2;
          out.tau = alpha_c / alpha;
          out.nu = 1.0 - out.tau;
        }
        return out;
      }
    }
  }

  // d >= 3: only fixed densities are meaningful
  if (spec.kind != RhoSpec::Kind::Fixed)
    throw parameter_error("limits: d >= 3 requires a fixed density specification");
  double rho_c = critical_density(density, theta);
  double rho = spec.c;
  if (rho < rho_c * (1.0 - 1e-12)) {
    out.kind = RegimeCase::SubConst;
  } else if (rho <= rho_c * (1.0 + 1e-12)) {
    out.kind = RegimeCase::CriticalHighD;
  } else {
    out.kind = RegimeCase::Super3;
    out.tau = rho_c / rho;
    out.nu = 1.0 - out.tau;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fixed-density first-cycle law

YLawPrefix y_pmf(const JumpDensity& density, double theta, double rho, std::int64_t j_max) {
  if (j_max < 1) throw parameter_error("limits: y_pmf needs j_max >= 1");
  YLawPrefix out;
  out.r_star = solve_r_star(density, theta, rho);
  out.pmf.resize(static_cast<size_t>(j_max));
  double rj = out.r_star;
  for (std::int64_t j = 1; j <= j_max; ++j) {
    out.pmf[static_cast<size_t>(j - 1)] = theta / rho * density.conv_zero(j) * rj;
    out.prefix_mass += out.pmf[static_cast<size_t>(j - 1)];
    rj *= out.r_star;
  }
  return out;
}

// ---------------------------------------------------------------------------
// One-dimensional critical limit density

double theta_density(double alpha, double sigma, double theta, double x) {
  if (!(alpha > 0.0 && sigma > 0.0 && theta > 0.0))
    throw parameter_error("limits: theta density needs positive alpha, sigma, theta");
  if (!(x > 0.0 && x < 1.0))
    throw domain_error("limits: theta density lives on (0, 1)");
  double wrap = theta_sum(kTwoPiSq * sigma * sigma * alpha * alpha * x);
  double s = 1.0 / (2.0 * alpha * alpha * sigma * sigma * (1.0 - x));
  double log_series = theta_law_series_log(theta, s);
  double log_z = std::log(theta_density_normalizer(alpha, sigma, theta));
  return std::exp(std::log(wrap) - 1.5 * std::log1p(-x) + log_series - log_z);
}

double theta_density_normalizer(double alpha, double sigma, double theta) {
  if (!(alpha > 0.0 && sigma > 0.0 && theta > 0.0))
    throw parameter_error("limits: theta density needs positive alpha, sigma, theta");
  double s = 1.0 / (2.0 * alpha * alpha * sigma * sigma);
  return std::exp(theta_law_series_log(theta, s)) / theta;
}

// ---------------------------------------------------------------------------
// Reference laws

namespace {

double theta_law_cdf(const ThetaDensityLaw& law, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // substitute x = u^2 to tame the x^{-1/2} behaviour at the left edge
  auto f = [&](double u) {
    double xx = u * u;
    if (xx <= 0.0 || xx >= 1.0) return 0.0;
    return 2.0 * u * theta_density(law.alpha, law.sigma, law.theta, xx);
  };
  double v = integrate(f, 0.0, std::sqrt(x), 1e-10);
  return std::min(1.0, std::max(0.0, v));
}

}  // namespace

double reference_cdf(const LimitLaw& law, double x) {
  if (std::holds_alternative<GammaHalfLaw>(law)) {
    if (x <= 0.0) return 0.0;
    return regularized_lower_gamma(0.5, x);
  }
  if (std::holds_alternative<UniformLogScaleLaw>(law)) {
    return std::min(1.0, std::max(0.0, x));
  }
  if (const auto* t = std::get_if<ThetaDensityLaw>(&law)) {
    return theta_law_cdf(*t, x);
  }
  if (const auto* y = std::get_if<DiscreteYLaw>(&law)) {
    if (x < 1.0) return 0.0;
    double cum = 0.0;
    std::int64_t jx = static_cast<std::int64_t>(std::floor(x));
    for (std::int64_t j = 1; j <= jx && j <= static_cast<std::int64_t>(y->pmf.size()); ++j)
      cum += y->pmf[static_cast<size_t>(j - 1)];
    return std::min(1.0, cum);
  }
  const auto& x1 = std::get<X1Law>(law);
  if (x < 0.0) return 0.0;
  double span = 1.0 - x1.tau;
  if (x >= span) return 1.0;
  return x1.tau + span * (1.0 - std::pow(1.0 - x / span, x1.theta));
}

double reference_density(const LimitLaw& law, double x) {
  if (std::holds_alternative<GammaHalfLaw>(law)) {
    if (x <= 0.0) return 0.0;
    return std::exp(-x) / (std::sqrt(kPi * x));
  }
  if (std::holds_alternative<UniformLogScaleLaw>(law)) {
    return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
  }
  if (const auto* t = std::get_if<ThetaDensityLaw>(&law)) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return theta_density(t->alpha, t->sigma, t->theta, x);
  }
  if (std::holds_alternative<DiscreteYLaw>(law))
    throw domain_error("limits: the fixed-density law is discrete");
  const auto& x1 = std::get<X1Law>(law);
  double span = 1.0 - x1.tau;
  if (x <= 0.0 || x >= span) return 0.0;
  return x1.theta * std::pow(1.0 - x / span, x1.theta - 1.0);
}

}  // namespace srp
