#include "srp/genfun.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include "srp/errors.hpp"

namespace srp {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPiSq = 2.0 * kPi * kPi;

double min_eigenvalue(const SymMatrix& m) {
  std::vector<double> ev;
  SymMatrix vec;
  m.eigen_sym(ev, vec);
  return ev.front();
}

// real part of the n-th derivative summand at transform value c
double deriv_term(int n, double r, std::complex<double> c) {
  if (n == 0) {
    return -std::log(std::abs(1.0 - r * c));  // Re log(1 - r c)
  }
  std::complex<double> num = std::pow(c, n);
  std::complex<double> den = std::pow(1.0 - r * c, n);
  double fact = (n == 3) ? 2.0 : 1.0;  // (n-1)!
  return fact * (num / den).real();
}

// Enumerate k in Z^d with |k| <= radius, calling f for each point.
template <typename F>
void for_lattice_in_ball(int dim, double radius, F&& f) {
  std::vector<double> k(static_cast<size_t>(dim), 0.0);
  double r2 = radius * radius;
  std::function<void(int, double)> rec = [&](int axis, double used) {
    if (axis == dim) {
      f(std::span<const double>(k));
      return;
    }
    int kmax = static_cast<int>(std::floor(std::sqrt(std::max(0.0, r2 - used))));
    for (int v = -kmax; v <= kmax; ++v) {
      k[static_cast<size_t>(axis)] = v;
      rec(axis + 1, used + static_cast<double>(v) * v);
    }
  };
  rec(0, 0.0);
}

// Lattice points of Z^d grouped by squared norm. For an isotropic Gaussian
// the transform depends on |m|^2 alone, collapsing a d-dimensional sum to a
// short one over distinct norms.
struct NormCounts {
  std::vector<double> counts;  // counts[s] = #{k in Z^d : |k|^2 = s}
};

std::shared_ptr<const NormCounts> norm_counts(int dim, int radius) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const NormCounts>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim, radius);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const int smax = radius * radius;
  auto profile = std::make_shared<NormCounts>();
  std::vector<double> cur(static_cast<size_t>(smax) + 1, 0.0);
  cur[0] = 1.0;
  for (int axis = 0; axis < dim; ++axis) {
    std::vector<double> next(static_cast<size_t>(smax) + 1, 0.0);
    for (int s = 0; s <= smax; ++s) {
      if (cur[static_cast<size_t>(s)] == 0.0) continue;
      for (int k = 0; s + k * k <= smax; ++k)
        next[static_cast<size_t>(s + k * k)] +=
            cur[static_cast<size_t>(s)] * (k == 0 ? 1.0 : 2.0);
    }
    cur.swap(next);
  }
  profile->counts = std::move(cur);
  if (cache.size() > 16) cache.clear();
  cache[key] = profile;
  return profile;
}

// falling factorial (j-1)(j-2)...(j-n+1) entering the n-th derivative
double series_poly(int n, double j) {
  switch (n) {
    case 0: return 1.0 / j;
    case 1: return 1.0;
    case 2: return j - 1.0;
    default: return (j - 1.0) * (j - 2.0);
  }
}

// sum_{j > j0} of series_poly(n, j) * j^{-d/2}  via Euler-Maclaurin
double bulk_tail_at_one(int n, int d, double j0) {
  double s = 0.5 * d;
  switch (n) {
    case 0: return power_sum_tail(s + 1.0, j0);
    case 1: return power_sum_tail(s, j0);
    case 2: return power_sum_tail(s - 1.0, j0) - power_sum_tail(s, j0);
    default:
      return power_sum_tail(s - 2.0, j0) - 3.0 * power_sum_tail(s - 1.0, j0) +
             2.0 * power_sum_tail(s, j0);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Finite-volume generating function

double genfun_deriv(const ModelParams& params, int n, double r) {
  if (n < 0 || n > 3) throw parameter_error("genfun: derivative order must be in 0..3");
  if (!(r >= 0.0) || r >= 1.0)
    throw domain_error("genfun: G_L derivatives require 0 <= r < 1");
  const JumpDensity& den = params.density;
  const double L = params.side;

  if (r == 0.0 && n == 0) return 0.0;

  if (den.is_gaussian() && den.dim() == 1) {
    double s2 = den.covariance()(0, 0);
    int kmax =
        static_cast<int>(L * std::sqrt(22.0 * std::log(10.0) / (kTwoPiSq * s2))) + 2;
    double sum = deriv_term(n, r, {1.0, 0.0});
    for (int k = 1; k <= kmax; ++k) {
      double phat = std::exp(-kTwoPiSq * s2 * k * k / (L * L));
      sum += 2.0 * deriv_term(n, r, {phat, 0.0});
    }
    return params.theta * sum;
  }

  if (den.is_gaussian()) {
    // isotropic: group lattice points by squared norm
    auto diag = den.covariance().diagonal_values();
    bool isotropic = den.has_diagonal_covariance();
    for (double s2 : diag) isotropic = isotropic && s2 == diag.front();
    if (isotropic) {
      double s2 = diag.front();
      int radius =
          static_cast<int>(L * std::sqrt(22.0 * std::log(10.0) / (kTwoPiSq * s2))) + 2;
      auto profile = norm_counts(den.dim(), radius);
      double a = kTwoPiSq * s2 / (L * L);
      double sum = 0.0;
      const auto& counts = profile->counts;
      for (size_t s = 0; s < counts.size(); ++s) {
        if (counts[s] == 0.0) continue;
        double phat = std::exp(-a * static_cast<double>(s));
        sum += counts[s] * deriv_term(n, r, {phat, 0.0});
      }
      return params.theta * sum;
    }
    double lam_min = min_eigenvalue(den.covariance());
    double radius = L * std::sqrt(22.0 * std::log(10.0) / (kTwoPiSq * lam_min)) + 2.0;
    if (std::pow(2.0 * radius + 1.0, den.dim()) > 2e8)
      throw numeric_error("genfun: lattice enumeration too large for this (d, L)");
    double sum = 0.0;
    std::vector<double> m(static_cast<size_t>(den.dim()));
    for_lattice_in_ball(den.dim(), radius, [&](std::span<const double> k) {
      for (int i = 0; i < den.dim(); ++i) m[static_cast<size_t>(i)] = k[i] / L;
      double phat = std::exp(-kTwoPiSq * den.covariance().quad_form(m));
      sum += deriv_term(n, r, {phat, 0.0});
    });
    return params.theta * sum;
  }

  // tabulated, d = 1
  double sum = deriv_term(n, r, {1.0, 0.0});
  int quiet = 0;
  for (int k = 1;; ++k) {
    std::complex<double> c = den.char_fn_1d(static_cast<double>(k) / L);
    sum += 2.0 * deriv_term(n, r, c);
    if (std::abs(c) < 1e-17)
      ++quiet;
    else
      quiet = 0;
    if (quiet >= 32) break;
    if (k > 5000000) throw numeric_error("genfun: lattice truncation bound unattainable");
  }
  return params.theta * sum;
}

// ---------------------------------------------------------------------------
// Per-volume limit

double bulk_genfun_deriv(const JumpDensity& density, double theta, int n, double r) {
  if (n < 0 || n > 3) throw parameter_error("genfun: derivative order must be in 0..3");
  if (!(r >= 0.0) || r > 1.0) throw domain_error("genfun: g derivatives require 0 <= r <= 1");
  const int d = density.dim();

  if (r == 1.0) {
    if (n > 0 && d <= 2 * n)
      throw domain_error("genfun: g^(" + std::to_string(n) + ")(1) diverges for d <= 2n");
    if (!density.is_gaussian())
      throw numeric_error("genfun: g derivatives at r = 1 need a Gaussian density");
    double c = std::pow(2.0 * kPi, -0.5 * d) / density.det_sqrt_covariance();
    const std::int64_t j0 = 16384;
    double sum = 0.0;
    for (std::int64_t j = std::max<std::int64_t>(1, n); j <= j0; ++j) {
      double jd = static_cast<double>(j);
      sum += series_poly(n, jd) * std::pow(jd, -0.5 * d);
    }
    return theta * c * (sum + bulk_tail_at_one(n, d, static_cast<double>(j0) + 1.0));
  }

  double sum = 0.0;
  std::int64_t j = std::max<std::int64_t>(1, n);
  double rpow = std::pow(r, static_cast<double>(j) - n);  // r^{j-n}
  for (;; ++j) {
    double jd = static_cast<double>(j);
    double w = density.conv_zero(j);
    double term = w * series_poly(n, jd) * rpow;
    sum += term;
    // geometric remainder certificate: the term ratio tends to r
    double growth = (n >= 2) ? std::exp(static_cast<double>(n) / jd) : 1.0;
    double q = r * growth;
    if (j > 8 && q < 1.0) {
      double rem = std::fabs(term) * q / (1.0 - q);
      if (std::fabs(term) < 1e-16 * std::fabs(sum) && rem < 1e-14 * std::fabs(sum)) break;
    }
    if (j > 300000000)
      throw numeric_error("genfun: g series does not converge at r = " + std::to_string(r));
    rpow *= r;
  }
  return theta * sum;
}

// ---------------------------------------------------------------------------
// Saddle point

SaddleInfo solve_saddle(const ModelParams& params) {
  const double n_target = static_cast<double>(params.particles);
  auto h = [&](double r) { return r * genfun_deriv(params, 1, r) - n_target; };

  double lo = 0.0;
  double hi = 1.0 - 1.0 / 64.0;
  int guard = 0;
  while (h(hi) < 0.0) {
    lo = hi;
    hi = 1.0 - 0.25 * (1.0 - hi);
    if (++guard > 200 || hi >= 1.0 - 1e-15)
      throw numeric_error("genfun: saddle bracketing failed");
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double v = h(mid);
    if (std::fabs(v) <= 1e-10 * n_target || (hi - lo) <= 1e-13) {
      lo = hi = mid;
      break;
    }
    (v < 0.0 ? lo : hi) = mid;
  }
  SaddleInfo s;
  s.r = 0.5 * (lo + hi);
  s.g0 = genfun_deriv(params, 0, s.r);
  s.g1 = genfun_deriv(params, 1, s.r);
  s.g2 = genfun_deriv(params, 2, s.r);
  s.g3 = genfun_deriv(params, 3, s.r);
  s.a = s.r * s.g1 + s.r * s.r * s.g2;
  s.b = s.r * s.g1 + 3.0 * s.r * s.r * s.g2 + s.r * s.r * s.r * s.g3;
  return s;
}

// ---------------------------------------------------------------------------
// Sub-critical tilt r_*

double solve_r_star(const JumpDensity& density, double theta, double rho) {
  if (!(rho > 0.0)) throw parameter_error("genfun: rho must be positive");
  if (density.dim() >= 3) {
    double rho_c = critical_density(density, theta);
    if (rho > rho_c * (1.0 + 1e-12))
      throw domain_error("genfun: no r_* above the critical density in d >= 3");
    if (std::fabs(rho - rho_c) <= 1e-12 * rho_c) return 1.0;
  }
  auto f = [&](double r) { return r * bulk_genfun_deriv(density, theta, 1, r) - rho; };

  double lo = 0.0;
  double hi = 0.5;
  int guard = 0;
  while (f(hi) < 0.0) {
    lo = hi;
    hi = 1.0 - 0.5 * (1.0 - hi);
    if (++guard > 60) throw numeric_error("genfun: r_* bracketing failed");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-13; ++it) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// F_L(1)

double singular_part_at_one(const ModelParams& params, std::int64_t min_terms) {
  const JumpDensity& den = params.density;
  const double L = params.side;
  const double theta = params.theta;
  // The geometric tail control below is term-wise exact (every mode decays
  // at rate >= a_min per power), so a small floor suffices; an explicit
  // min_terms is honored for self-consistency checks.
  if (min_terms <= 0) min_terms = 64;

  // D(p) = sum_{m != 0} phi_hat(m)^p, assembled without cancellation
  std::function<double(std::int64_t)> lattice_rest;

  if (den.is_gaussian() && den.has_diagonal_covariance()) {
    auto diag = den.covariance().diagonal_values();
    lattice_rest = [&, diag](std::int64_t p) {
      double log_prod = 0.0;
      for (double s2 : diag)
        log_prod += std::log1p(theta_sum_minus_one(kTwoPiSq * p * s2 / (L * L)));
      return std::expm1(log_prod);
    };
  } else if (den.is_gaussian()) {
    double lam_min = min_eigenvalue(den.covariance());
    lattice_rest = [&, lam_min](std::int64_t p) {
      double radius =
          L * std::sqrt(19.0 * std::log(10.0) / (kTwoPiSq * static_cast<double>(p) * lam_min)) +
          2.0;
      if (std::pow(2.0 * radius + 1.0, den.dim()) > 2e8)
        throw numeric_error("genfun: F_L(1) lattice enumeration too large");
      double sum = 0.0;
      std::vector<double> m(static_cast<size_t>(den.dim()));
      for_lattice_in_ball(den.dim(), radius, [&](std::span<const double> k) {
        bool origin = true;
        for (int i = 0; i < den.dim(); ++i) {
          m[static_cast<size_t>(i)] = k[i] / L;
          if (k[i] != 0.0) origin = false;
        }
        if (origin) return;
        sum += std::exp(-kTwoPiSq * static_cast<double>(p) * den.covariance().quad_form(m));
      });
      return sum;
    };
  } else {
    lattice_rest = [&](std::int64_t p) {
      double sum = 0.0;
      int quiet = 0;
      for (int k = 1;; ++k) {
        std::complex<double> c = den.char_fn_1d(static_cast<double>(k) / L);
        double mod = std::abs(c);
        sum += 2.0 * std::pow(mod, static_cast<double>(p)) *
               std::cos(static_cast<double>(p) * std::arg(c));
        if (mod < 1e-16)
          ++quiet;
        else
          quiet = 0;
        if (quiet >= 32) break;
        if (k > 2000000) throw numeric_error("genfun: F_L(1) lattice sum did not converge");
      }
      return sum;
    };
  }

  // slowest geometric decay rate across modes
  double a_min;
  if (den.is_gaussian()) {
    a_min = kTwoPiSq * min_eigenvalue(den.covariance()) / (L * L);
  } else {
    double mod1 = std::abs(den.char_fn_1d(1.0 / L));
    a_min = -std::log(std::max(1e-300, std::min(mod1, 1.0 - 1e-12)));
  }

  double sum = 0.0;
  for (std::int64_t p = 1;; ++p) {
    double dp = lattice_rest(p);
    sum += theta * dp / static_cast<double>(p);
    if (p >= min_terms) {
      double tail = theta * dp / static_cast<double>(p) *
                    std::exp(-a_min) / std::max(1e-300, -std::expm1(-a_min));
      if (tail < 1e-13 * std::max(std::fabs(sum), 1e-12)) break;
    }
    if (p > 100000000) throw numeric_error("genfun: F_L(1) series did not converge");
  }
  return sum;
}

double singular_part_from_table(const WeightTable& table) {
  double sum = 0.0;
  for (std::int64_t j = 1; j <= table.size(); ++j)
    sum += (table.at(j) - table.tail_value) / static_cast<double>(j);
  return sum;
}

// ---------------------------------------------------------------------------
// coth form of G_L' in d = 1

double genfun_coth_deriv_1d(const ModelParams& params, double r) {
  if (params.dim() != 1) throw domain_error("genfun: coth form requires d = 1");
  if (!(r >= 0.0) || r >= 1.0) throw domain_error("genfun: coth form requires 0 <= r < 1");
  double sigma = std::sqrt(params.density.variance_1d());
  double u = params.side * std::sqrt(1.0 - r) / (std::sqrt(2.0) * sigma);
  return params.theta * params.side / (std::sqrt(2.0) * sigma * std::sqrt(1.0 - r)) /
         std::tanh(u);
}

}  // namespace srp
