#include "srp/weights.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <iostream>
#include <limits>
#include <span>

#include "srp/errors.hpp"

namespace srp {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPiSq = 2.0 * kPi * kPi;

// 1 + 2 sum_{k>=1} exp(-a k^2), truncated when a term drops below
// 1e-18 of the partial sum, plus a two-mode safety margin.
double axis_theta_sum(double a) {
  double s = 1.0;
  int k = 1;
  for (;; ++k) {
    double t = 2.0 * std::exp(-a * k * k);
    s += t;
    if (t < 1e-18 * s) break;
    if (k > 2000000) throw numeric_error("weights: lattice truncation bound unattainable");
  }
  s += 2.0 * std::exp(-a * (k + 1.0) * (k + 1.0)) + 2.0 * std::exp(-a * (k + 2.0) * (k + 2.0));
  return s;
}

// Enumerate k in Z^d with |k| <= radius and accumulate f(k).
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

double min_eigenvalue(const SymMatrix& m) {
  std::vector<double> ev;
  SymMatrix vec;
  m.eigen_sym(ev, vec);
  return ev.front();
}

double clamp_weight(double w, std::int64_t* clamped) {
  if (w >= 0.0) return w;
  if (w > -1e-12) {
    if (clamped)
      ++*clamped;
    else
      std::cerr << "srp: weights: clamped a tiny negative weight to zero\n";
    return 0.0;
  }
  throw numeric_error("weights: weight evaluated significantly negative");
}

// Fourier-side sum theta * sum_{m in (1/L)Z^d} phi_hat(m)^j.
double fourier_weight(const ModelParams& p, std::int64_t j, std::int64_t* clamped) {
  const JumpDensity& den = p.density;
  const double L = p.side;
  const double jd = static_cast<double>(j);

  if (den.is_gaussian() && den.has_diagonal_covariance()) {
    // product across axes of 1d theta sums
    double w = p.theta;
    for (double s2 : den.covariance().diagonal_values())
      w *= axis_theta_sum(kTwoPiSq * jd * s2 / (L * L));
    return w;
  }

  if (den.is_gaussian()) {
    double lam_min = min_eigenvalue(den.covariance());
    // include every m with exp(-2 pi^2 j lam_min |m|^2) >= 1e-19
    double radius = L * std::sqrt(19.0 * std::log(10.0) / (kTwoPiSq * jd * lam_min)) + 2.0;
    if (std::pow(2.0 * radius + 1.0, den.dim()) > 4e8)
      throw numeric_error("weights: lattice enumeration too large for this (d, L, j)");
    double sum = 0.0;
    std::vector<double> m(static_cast<size_t>(den.dim()));
    for_lattice_in_ball(den.dim(), radius, [&](std::span<const double> k) {
      for (int i = 0; i < den.dim(); ++i) m[static_cast<size_t>(i)] = k[i] / L;
      sum += std::exp(-kTwoPiSq * jd * den.covariance().quad_form(m));
    });
    return p.theta * sum;
  }

  // tabulated, d = 1: complex transform powers, real by conjugate symmetry
  if (j == 1) {
    // one convolution is the density itself: theta L sum_k phi(L k)
    double sum = 0.0;
    double span_x = den.grid().back();
    int kmax = static_cast<int>(std::floor(span_x / L)) + 1;
    for (int k = -kmax; k <= kmax; ++k) sum += den.value_at(L * k);
    return clamp_weight(p.theta * L * sum, clamped);
  }

  double sum = 1.0;  // m = 0 term: phi_hat(0)^j = 1
  int quiet = 0;
  double c4 = den.decay_c4();
  for (int k = 1;; ++k) {
    double t = k / L;
    std::complex<double> c = den.char_fn_1d(t);
    double mod = std::abs(c);
    double arg = std::arg(c);
    sum += 2.0 * std::pow(mod, jd) * std::cos(jd * arg);
    if (std::pow(mod, jd) < 1e-17 * std::max(std::fabs(sum), 1e-3))
      ++quiet;
    else
      quiet = 0;
    if (quiet >= 32) {
      // certified tail under |phi_hat| <= C4 / t^4
      double q = c4 / (t * t * t * t);
      if (q < 0.9) {
        double tail = 2.0 * std::pow(q, jd) * (t * L) / (4.0 * jd - 1.0);
        if (tail <= 1e-13 * std::max(std::fabs(sum), 1e-3)) break;
      }
      if (quiet >= 4096)
        throw numeric_error("weights: lattice truncation bound unattainable (tabulated)");
    }
    if (k > 5000000) throw numeric_error("weights: lattice truncation bound unattainable");
  }
  return clamp_weight(p.theta * sum, clamped);
}

// Real-space sum theta L^d sum_k phi^{*j}(L k), Gaussian closed form.
double real_space_weight(const ModelParams& p, std::int64_t j) {
  const JumpDensity& den = p.density;
  if (!den.is_gaussian())
    throw domain_error("weights: real-space representation requires a Gaussian density");
  const double L = p.side;
  const double jd = static_cast<double>(j);
  const int d = den.dim();
  double prefactor =
      p.theta * std::pow(L, d) * std::pow(2.0 * kPi * jd, -0.5 * d) / den.det_sqrt_covariance();

  if (den.has_diagonal_covariance()) {
    double prod = 1.0;
    for (double s2 : den.covariance().diagonal_values())
      prod *= axis_theta_sum(L * L / (2.0 * jd * s2));
    return prefactor * prod;
  }

  SymMatrix inv = den.covariance().inverse_spd();
  double lam_min_inv = min_eigenvalue(inv);
  double radius = std::sqrt(2.0 * jd * 19.0 * std::log(10.0) / (L * L * lam_min_inv)) + 2.0;
  if (std::pow(2.0 * radius + 1.0, d) > 4e8)
    throw numeric_error("weights: lattice enumeration too large for this (d, L, j)");
  double sum = 0.0;
  std::vector<double> x(static_cast<size_t>(d));
  for_lattice_in_ball(d, radius, [&](std::span<const double> k) {
    for (int i = 0; i < d; ++i) x[static_cast<size_t>(i)] = L * k[i];
    sum += std::exp(-0.5 / jd * inv.quad_form(x));
  });
  return prefactor * sum;
}

}  // namespace

// ---------------------------------------------------------------------------
// ModelParams

double ModelParams::rho() const {
  return static_cast<double>(particles) / std::pow(side, density.dim());
}

ModelParams ModelParams::with_side(JumpDensity density, double theta, double side,
                                   std::int64_t particles) {
  if (!(theta > 0.0)) throw parameter_error("weights: theta must be positive");
  if (!(side >= 1.0)) throw parameter_error("weights: side length must satisfy L >= 1");
  if (particles < 1) throw parameter_error("weights: need at least one particle");
  ModelParams p;
  p.density = std::move(density);
  p.theta = theta;
  p.side = side;
  p.particles = particles;
  return p;
}

ModelParams ModelParams::with_rho(JumpDensity density, double theta, double rho,
                                  std::int64_t particles) {
  if (!(rho > 0.0)) throw parameter_error("weights: rho must be positive");
  double side = std::pow(static_cast<double>(particles) / rho, 1.0 / density.dim());
  return with_side(std::move(density), theta, side, particles);
}

// ---------------------------------------------------------------------------
// Public operations

double cycle_weight(const ModelParams& params, std::int64_t j) {
  if (j < 1) throw parameter_error("weights: cycle length must be >= 1");
  return fourier_weight(params, j, nullptr);
}

double cycle_weight_real_space(const ModelParams& params, std::int64_t j) {
  if (j < 1) throw parameter_error("weights: cycle length must be >= 1");
  return real_space_weight(params, j);
}

WeightTable make_weight_table(const ModelParams& params) {
  WeightTable table;
  table.params = params;
  table.tail_value = params.theta;
  const std::int64_t n = params.particles;
  table.w.assign(static_cast<size_t>(n), 0.0);
  const double crossover = params.side * params.side;

  if (params.density.is_gaussian()) {
    parallel_for_chunks(n, [&](std::int64_t b, std::int64_t e) {
      for (std::int64_t i = b; i < e; ++i) {
        std::int64_t j = i + 1;
        // small j: the real-space dual converges in a few modes; large j: the
        // transform side does.
        double w = (static_cast<double>(j) < crossover) ? real_space_weight(params, j)
                                                        : fourier_weight(params, j, nullptr);
        table.w[static_cast<size_t>(i)] = w;
      }
    });
    return table;
  }

  // tabulated: iterate transform powers over the cached lattice values
  const JumpDensity& den = params.density;
  const double L = params.side;
  // lattice span: go out to where |phi_hat| sits at the quadrature floor,
  // capped at the band the grid can resolve
  std::int64_t band = static_cast<std::int64_t>(0.5 / den.grid_step() * L);
  std::int64_t kmax = 16;
  while (std::abs(den.char_fn_1d(static_cast<double>(kmax) / L)) > 1e-16 && 2 * kmax <= band)
    kmax *= 2;
  std::vector<std::complex<double>> base(static_cast<size_t>(kmax) + 1);
  std::vector<std::complex<double>> power(static_cast<size_t>(kmax) + 1);
  for (std::int64_t k = 0; k <= kmax; ++k) {
    base[static_cast<size_t>(k)] = den.char_fn_1d(static_cast<double>(k) / L);
    power[static_cast<size_t>(k)] = base[static_cast<size_t>(k)];
  }
  for (std::int64_t j = 1; j <= n; ++j) {
    if (j == 1) {
      // the density route is exact for a single convolution
      table.w[0] = clamp_weight(cycle_weight(params, 1), &table.clamped);
    } else {
      double sum = 1.0;
      for (std::int64_t k = 1; k <= kmax; ++k) sum += 2.0 * power[static_cast<size_t>(k)].real();
      table.w[static_cast<size_t>(j - 1)] = clamp_weight(params.theta * sum, &table.clamped);
    }
    if (j < n)
      for (std::int64_t k = 0; k <= kmax; ++k)
        power[static_cast<size_t>(k)] *= base[static_cast<size_t>(k)];
  }
  if (table.clamped > 0)
    std::cerr << "srp: weights: clamped " << table.clamped
              << " tiny negative table entries to zero\n";
  return table;
}

double critical_density(const JumpDensity& density, double theta) {
  if (!(theta > 0.0)) throw parameter_error("weights: theta must be positive");
  if (density.dim() <= 2) return std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::int64_t j = 1;
  for (; j <= 1 << 15; ++j) sum += density.conv_zero(j);
  return theta * (sum + density.conv_zero_tail(j));
}

double critical_log_slope(const JumpDensity& density, double theta) {
  if (!(theta > 0.0)) throw parameter_error("weights: theta must be positive");
  if (density.dim() != 2)
    throw domain_error("weights: alpha_c is defined in dimension 2 only");
  return theta / (2.0 * kPi * std::sqrt(density.det_covariance()));
}

}  // namespace srp
