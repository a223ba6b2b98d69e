#ifndef SRP_NUMERIC_HPP
#define SRP_NUMERIC_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace srp {

// ---------------------------------------------------------------------------
// Small dense symmetric matrices (dimensions here are tiny, d <= ~6).

class SymMatrix {
 public:
  SymMatrix() = default;
  SymMatrix(int dim, std::vector<double> row_major);
  static SymMatrix identity(int dim);
  static SymMatrix diagonal(std::span<const double> diag);

  int dim() const { return dim_; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }
  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
  const std::vector<double>& data() const { return a_; }

  bool is_diagonal(double tol = 0.0) const;
  std::vector<double> diagonal_values() const;

  // q(v) = v^T M v
  double quad_form(std::span<const double> v) const;
  std::vector<double> mat_vec(std::span<const double> v) const;

  // Eigen-decomposition (cyclic Jacobi). Eigenvalues ascending.
  void eigen_sym(std::vector<double>& eigenvalues, SymMatrix& eigenvectors) const;

  bool is_positive_definite() const;
  double det() const;
  SymMatrix sqrt_spd() const;     // B with B^2 = M, M SPD
  SymMatrix inverse_spd() const;  // M^-1, M SPD

 private:
  int dim_ = 0;
  std::vector<double> a_;
};

// ---------------------------------------------------------------------------
// Stabilized sums.

double log_sum_exp(std::span<const double> v);

// Streaming log-sum-exp accumulator: add log-terms one by one.
class LogSumExpAcc {
 public:
  void add(double log_term);
  double value() const;  // log of the accumulated sum; -inf when empty
  bool empty() const { return n_ == 0; }
  // relative size of the last added term against the running sum
  double last_relative() const { return last_rel_; }

 private:
  double max_ = 0.0;
  double sum_ = 0.0;  // sum of exp(term - max_)
  double last_rel_ = 0.0;
  std::int64_t n_ = 0;
};

// ---------------------------------------------------------------------------
// Theta sums  T(a) = sum_{k in Z} exp(-a k^2),  a > 0.

double theta_sum_direct(double a);     // direct summation
double theta_sum(double a);            // modular swap to the dual form for a < pi
double theta_sum_minus_one(double a);  // sum over k != 0, no cancellation

// ---------------------------------------------------------------------------
// Tail of sum_{j >= j0} j^{-s}, s > 1, by Euler-Maclaurin. Near machine
// precision already for j0 >= ~32.
double power_sum_tail(double s, double j0);

// Riemann zeta for s > 1 (direct sum plus the tail above).
double zeta(double s);

// ---------------------------------------------------------------------------
// Regularized lower incomplete gamma P(a, x) (series / continued fraction).
double regularized_lower_gamma(double a, double x);

// ---------------------------------------------------------------------------
// The boundary series  S(theta, s) = sum_{n>=0} c_n(theta) (theta+n) e^{-(theta+n)^2 s}
// with c_n = prod_{i=1..n} (2 theta + i - 1)/i  (all coefficients positive).
// Returned as log S to stay usable when every term underflows a double.
double theta_law_series_log(double theta, double s);

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth = 40);

// ---------------------------------------------------------------------------
// Deterministic parallel chunking. Worker count comes from SPRP_THREADS,
// falling back to the hardware count. fn(begin, end) over [0, n).
int worker_count();
void parallel_for_chunks(std::int64_t n,
                         const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace srp

#endif
