#include "srp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "srp/errors.hpp"

namespace srp {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPiSq = 2.0 * kPi * kPi;
}  // namespace

// ---------------------------------------------------------------------------
// Construction

JumpDensity JumpDensity::gaussian(int dim, const SymMatrix& covariance) {
  if (dim <= 0) throw parameter_error("spectral: dimension must be positive");
  if (covariance.dim() != dim)
    throw parameter_error("spectral: covariance dimension does not match d");
  if (!covariance.is_positive_definite())
    throw parameter_error("spectral: covariance must be positive definite");
  JumpDensity d;
  d.kind_ = Kind::Gaussian;
  d.dim_ = dim;
  d.cov_ = covariance;
  d.sqrt_cov_ = covariance.sqrt_spd();
  d.det_cov_ = covariance.det();
  d.det_sqrt_cov_ = d.sqrt_cov_.det();
  d.diagonal_cov_ = covariance.is_diagonal(0.0);
  return d;
}

JumpDensity JumpDensity::gaussian_isotropic(int dim, double sigma2) {
  if (!(sigma2 > 0.0)) throw parameter_error("spectral: sigma^2 must be positive");
  std::vector<double> diag(static_cast<size_t>(dim), sigma2);
  return gaussian(dim, SymMatrix::diagonal(diag));
}

JumpDensity JumpDensity::tabulated_1d(std::vector<double> grid, std::vector<double> values) {
  if (grid.size() != values.size())
    throw parameter_error("spectral: grid and values must have equal length");
  if (grid.size() < 8) throw parameter_error("spectral: tabulated grid too short");
  const size_t n = grid.size();
  double step = grid[1] - grid[0];
  if (!(step > 0.0)) throw parameter_error("spectral: grid must be strictly increasing");
  for (size_t i = 1; i < n; ++i) {
    double h = grid[i] - grid[i - 1];
    if (std::fabs(h - step) > 1e-9 * step)
      throw parameter_error("spectral: grid must be uniformly spaced");
  }
  for (double v : values)
    if (!(v >= 0.0)) throw parameter_error("spectral: values must be nonnegative");

  // trapezoid weights: half at the two endpoints
  auto trapz = [&](auto&& f) {
    double s = 0.5 * (f(0) + f(n - 1));
    for (size_t i = 1; i + 1 < n; ++i) s += f(i);
    return s * step;
  };

  double mass = trapz([&](size_t i) { return values[i]; });
  if (!(mass > 0.0)) throw parameter_error("spectral: values do not integrate to a density");
  for (double& v : values) v /= mass;

  // re-center so the numerical mean is zero
  double mean = trapz([&](size_t i) { return grid[i] * values[i]; });
  for (double& x : grid) x -= mean;
  double mean2 = trapz([&](size_t i) { return grid[i] * values[i]; });
  if (std::fabs(mean2) > 1e-10)
    throw numeric_error("spectral: re-centering failed to zero the mean");

  double var = trapz([&](size_t i) { return grid[i] * grid[i] * values[i]; });
  if (!(var > 0.0)) throw parameter_error("spectral: degenerate tabulated density");

  JumpDensity d;
  d.kind_ = Kind::Tabulated1D;
  d.dim_ = 1;
  d.grid_ = std::move(grid);
  d.values_ = std::move(values);
  d.step_ = step;
  d.cov_ = SymMatrix::diagonal(std::vector<double>{var});
  d.sqrt_cov_ = SymMatrix::diagonal(std::vector<double>{std::sqrt(var)});
  d.det_cov_ = var;
  d.det_sqrt_cov_ = std::sqrt(var);
  d.diagonal_cov_ = true;

  // fit the transform decay on the resolved band (t up to half Nyquist)
  double t_hi = 0.25 / step;
  double c2 = 0.0, c4 = 0.0;
  for (int k = 1; k <= 64; ++k) {
    double t = t_hi * k / 64.0;
    if (t < 0.5) continue;
    double a = std::abs(d.char_fn_1d(t));
    c2 = std::max(c2, a * t * t);
    c4 = std::max(c4, a * t * t * t * t);
  }
  d.decay_c2_ = 2.0 * std::max(c2, 1e-12);
  d.decay_c4_ = 2.0 * std::max(c4, 1e-12);
  return d;
}

JumpDensity JumpDensity::tabulated_1d_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parameter_error("spectral: cannot open CSV file " + path);
  std::vector<double> grid, values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x, v;
    if (!(row >> x >> v)) {
      if (grid.empty()) continue;  // tolerate a header line
      throw parameter_error("spectral: malformed CSV row in " + path + ": " + line);
    }
    grid.push_back(x);
    values.push_back(v);
  }
  return tabulated_1d(std::move(grid), std::move(values));
}

JumpDensity make_gaussian_density(int dim, const SymMatrix& covariance) {
  return JumpDensity::gaussian(dim, covariance);
}

JumpDensity make_tabulated_density_1d(std::vector<double> grid, std::vector<double> values) {
  return JumpDensity::tabulated_1d(std::move(grid), std::move(values));
}

double JumpDensity::variance_1d() const {
  if (dim_ != 1) throw domain_error("spectral: variance_1d requires d = 1");
  return cov_(0, 0);
}

double JumpDensity::value_at(double x) const {
  if (kind_ != Kind::Tabulated1D) throw domain_error("spectral: value_at is for tabulated kind");
  if (x < grid_.front() || x > grid_.back()) return 0.0;
  double u = (x - grid_.front()) / step_;
  size_t i = std::min(static_cast<size_t>(u), grid_.size() - 2);
  double frac = u - static_cast<double>(i);
  return values_[i] * (1.0 - frac) + values_[i + 1] * frac;
}

// ---------------------------------------------------------------------------
// Characteristic function

std::complex<double> JumpDensity::char_fn(std::span<const double> t) const {
  if (static_cast<int>(t.size()) != dim_)
    throw parameter_error("spectral: char_fn argument has wrong dimension");
  if (kind_ == Kind::Gaussian) {
    return std::complex<double>(std::exp(-kTwoPiSq * cov_.quad_form(t)), 0.0);
  }
  return char_fn_1d(t[0]);
}

std::complex<double> JumpDensity::char_fn_1d(double t) const {
  if (kind_ == Kind::Gaussian) {
    if (dim_ != 1) throw parameter_error("spectral: char_fn_1d requires d = 1");
    return {std::exp(-kTwoPiSq * cov_(0, 0) * t * t), 0.0};
  }
  // trapezoid sum of phi(x) e^{-2 pi i x t}
  const size_t n = grid_.size();
  double re = 0.0, im = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    double phase = -2.0 * kPi * grid_[i] * t;
    double v = w * values_[i];
    re += v * std::cos(phase);
    im += v * std::sin(phase);
  }
  return {re * step_, im * step_};
}

std::complex<double> char_fn(const JumpDensity& density, std::span<const double> t) {
  return density.char_fn(t);
}

// ---------------------------------------------------------------------------
// Convolution powers at the origin

double JumpDensity::conv_zero(std::int64_t j) const {
  if (j < 1) throw parameter_error("spectral: conv_zero needs j >= 1");
  if (kind_ == Kind::Gaussian) {
    return std::pow(2.0 * kPi * static_cast<double>(j), -0.5 * dim_) / det_sqrt_cov_;
  }
  // Fourier inversion: phi^{*j}(0) = int phi_hat(t)^j dt, real by symmetry.
  const double sigma = std::sqrt(cov_(0, 0));
  const double jd = static_cast<double>(j);
  // the integrand concentrates on |t| <~ 1/(2 pi sigma sqrt(j))
  double width = 1.0 / (2.0 * kPi * sigma * std::sqrt(jd));
  double h = std::min(1.0 / 64.0, width / 8.0);

  auto pow_at = [&](double t) {
    std::complex<double> c = char_fn_1d(t);
    double mod = std::abs(c);
    if (mod <= 0.0) return 0.0;
    double arg = std::arg(c);
    return std::pow(mod, jd) * std::cos(jd * arg);
  };

  // integrate outward from 0 until the integrand is numerically dead
  double sum = 0.5 * pow_at(0.0);  // trapezoid on [0, T]
  double t = 0.0;
  double t_hi = 0.5 / step_;  // resolved band
  int quiet = 0;
  while (true) {
    t += h;
    sum += pow_at(t);
    double mod = std::abs(char_fn_1d(t));
    if (std::pow(mod, jd) < 1e-17)
      ++quiet;
    else
      quiet = 0;
    if (quiet >= 24) break;
    if (t > t_hi)
      throw numeric_error("spectral: conv_zero quadrature left the resolved band");
  }
  double integral = 2.0 * sum * h;  // symmetric in t

  // Certify the dropped tail from decay bounds fitted just beyond the cut
  // (probe values floored at the quadrature noise level). Two envelopes:
  // a polynomial C/t^2 that covers the slow-decay region, and a quadratic
  // exponential e^{-c t^2} that covers large j, where the cut happens while
  // the transform itself is still near one.
  double c2 = 0.0;
  double c_quad = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 16; ++i) {
    double tp = t * (1.0 + i / 8.0);
    if (tp > t_hi) break;
    double mod = std::max(std::abs(char_fn_1d(tp)), 1e-16);
    c2 = std::max(c2, mod * tp * tp);
    c_quad = std::min(c_quad, -std::log(mod) / (tp * tp));
  }
  double log_tail_poly = (c2 > 0.0 && t > 0.0)
                             ? jd * std::log(c2 / (t * t)) + std::log(2.0 * t / (2.0 * jd - 1.0))
                             : std::numeric_limits<double>::infinity();
  double log_tail_quad = (c_quad > 0.0)
                             ? -jd * c_quad * t * t - std::log(jd * c_quad * t)
                             : std::numeric_limits<double>::infinity();
  double log_tail = std::min(log_tail_poly, log_tail_quad);
  double budget = std::log(1e-9 * std::max(std::fabs(integral), 1e-300));
  if (log_tail > budget)
    throw numeric_error("spectral: conv_zero tail estimate above tolerance");
  return integral;
}

double JumpDensity::conv_zero_tail(std::int64_t j0) const {
  if (dim_ <= 2)
    throw domain_error("spectral: conv_zero_tail diverges for d <= 2");
  if (j0 < 1) throw parameter_error("spectral: conv_zero_tail needs j0 >= 1");
  // Gaussian closed form termwise; the local CLT makes this the j^{-d/2}
  // envelope of any admissible density.
  double c = std::pow(2.0 * kPi, -0.5 * dim_) / det_sqrt_cov_;
  return c * power_sum_tail(0.5 * dim_, static_cast<double>(j0));
}

double conv_zero(const JumpDensity& density, std::int64_t j) { return density.conv_zero(j); }

double conv_zero_tail(const JumpDensity& density, std::int64_t j0) {
  return density.conv_zero_tail(j0);
}

}  // namespace srp
