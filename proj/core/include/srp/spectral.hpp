#ifndef SRP_SPECTRAL_HPP
#define SRP_SPECTRAL_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "srp/numeric.hpp"

namespace srp {

// A centered jump law on R^d. Two kinds:
//   * Gaussian(covariance): everything in closed form,
//   * Tabulated1D(grid, values): a density sampled on a uniform 1d grid,
//     re-centered so the numerical mean vanishes; transforms and convolution
//     values are computed by trapezoid quadrature (spectrally accurate for
//     rapidly decaying smooth densities).
// Immutable after construction, safe to share across threads.
class JumpDensity {
 public:
  enum class Kind { Gaussian, Tabulated1D };

  // empty placeholder; use the factories below for a usable density
  JumpDensity() = default;

  static JumpDensity gaussian(int dim, const SymMatrix& covariance);
  static JumpDensity gaussian_isotropic(int dim, double sigma2);
  static JumpDensity tabulated_1d(std::vector<double> grid, std::vector<double> values);
  // Two-column CSV: abscissa,value per line; '.' decimal separator.
  static JumpDensity tabulated_1d_from_csv(const std::string& path);

  Kind kind() const { return kind_; }
  bool is_gaussian() const { return kind_ == Kind::Gaussian; }
  int dim() const { return dim_; }

  const SymMatrix& covariance() const { return cov_; }
  double det_covariance() const { return det_cov_; }
  const SymMatrix& sqrt_covariance() const { return sqrt_cov_; }  // A, A^2 = cov
  double det_sqrt_covariance() const { return det_sqrt_cov_; }
  bool has_diagonal_covariance() const { return diagonal_cov_; }
  double variance_1d() const;  // d == 1 shortcut

  // tabulated kind only
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double grid_step() const { return step_; }
  // fitted decay constants:  |phi_hat(t)| <= decay_c2 / t^2  and  <= decay_c4 / t^4
  double decay_c2() const { return decay_c2_; }
  double decay_c4() const { return decay_c4_; }
  // density value at x by linear interpolation (0 outside the grid); d == 1
  double value_at(double x) const;

  std::complex<double> char_fn(std::span<const double> t) const;
  std::complex<double> char_fn_1d(double t) const;

  double conv_zero(std::int64_t j) const;       // phi^{*j}(0)
  double conv_zero_tail(std::int64_t j0) const;  // sum_{j >= j0} phi^{*j}(0), d >= 3

 private:
  Kind kind_ = Kind::Gaussian;
  int dim_ = 0;
  SymMatrix cov_;
  SymMatrix sqrt_cov_;
  double det_cov_ = 0.0;
  double det_sqrt_cov_ = 0.0;
  bool diagonal_cov_ = false;

  std::vector<double> grid_;
  std::vector<double> values_;
  double step_ = 0.0;
  double decay_c2_ = 0.0;
  double decay_c4_ = 0.0;
};

// Free-function spellings of the core operations.
JumpDensity make_gaussian_density(int dim, const SymMatrix& covariance);
JumpDensity make_tabulated_density_1d(std::vector<double> grid, std::vector<double> values);
std::complex<double> char_fn(const JumpDensity& density, std::span<const double> t);
double conv_zero(const JumpDensity& density, std::int64_t j);
double conv_zero_tail(const JumpDensity& density, std::int64_t j0);

}  // namespace srp

#endif
