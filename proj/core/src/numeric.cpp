#include "srp/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "srp/errors.hpp"

namespace srp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// SymMatrix

SymMatrix::SymMatrix(int dim, std::vector<double> row_major)
    : dim_(dim), a_(std::move(row_major)) {
  if (dim <= 0) throw parameter_error("SymMatrix: dimension must be positive");
  if (a_.size() != static_cast<size_t>(dim) * dim)
    throw parameter_error("SymMatrix: need dim*dim entries");
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      double diff = std::fabs((*this)(i, j) - (*this)(j, i));
      double scale = std::max({1.0, std::fabs((*this)(i, j)), std::fabs((*this)(j, i))});
      if (diff > 1e-12 * scale) throw parameter_error("SymMatrix: matrix is not symmetric");
      double sym = 0.5 * ((*this)(i, j) + (*this)(j, i));
      (*this)(i, j) = sym;
      (*this)(j, i) = sym;
    }
}

SymMatrix SymMatrix::identity(int dim) {
  std::vector<double> a(static_cast<size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) a[static_cast<size_t>(i) * dim + i] = 1.0;
  return SymMatrix(dim, std::move(a));
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  int dim = static_cast<int>(diag.size());
  std::vector<double> a(static_cast<size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) a[static_cast<size_t>(i) * dim + i] = diag[i];
  return SymMatrix(dim, std::move(a));
}

bool SymMatrix::is_diagonal(double tol) const {
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      if (i != j && std::fabs((*this)(i, j)) > tol) return false;
  return true;
}

std::vector<double> SymMatrix::diagonal_values() const {
  std::vector<double> d(dim_);
  for (int i = 0; i < dim_; ++i) d[i] = (*this)(i, i);
  return d;
}

double SymMatrix::quad_form(std::span<const double> v) const {
  double q = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) q += v[i] * (*this)(i, j) * v[j];
  return q;
}

std::vector<double> SymMatrix::mat_vec(std::span<const double> v) const {
  std::vector<double> out(dim_, 0.0);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

void SymMatrix::eigen_sym(std::vector<double>& eigenvalues, SymMatrix& eigenvectors) const {
  const int n = dim_;
  SymMatrix a = *this;
  SymMatrix v = SymMatrix::identity(n);

  auto off_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
  };
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::fabs(a(i, j)));
  if (scale == 0.0) scale = 1.0;

  for (int sweep = 0; sweep < 64 && off_norm() > 1e-15 * scale * n; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        double phi = 0.5 * std::atan2(2.0 * apq, a(q, q) - a(p, p));
        double c = std::cos(phi), s = std::sin(phi);
        for (int k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) < a(y, y); });

  eigenvalues.resize(n);
  SymMatrix sorted_v = SymMatrix::identity(n);
  for (int i = 0; i < n; ++i) {
    eigenvalues[i] = a(order[i], order[i]);
    for (int k = 0; k < n; ++k) sorted_v(k, i) = v(k, order[i]);
  }
  eigenvectors = sorted_v;
}

bool SymMatrix::is_positive_definite() const {
  std::vector<double> ev;
  SymMatrix vec;
  eigen_sym(ev, vec);
  double top = std::fabs(ev.back());
  return ev.front() > 0.0 && ev.front() > 1e-13 * std::max(top, 1e-300);
}

double SymMatrix::det() const {
  std::vector<double> ev;
  SymMatrix vec;
  eigen_sym(ev, vec);
  double d = 1.0;
  for (double l : ev) d *= l;
  return d;
}

namespace {
SymMatrix assemble(const SymMatrix& v, const std::vector<double>& lam) {
  int n = v.dim();
  SymMatrix out = SymMatrix::identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += v(i, k) * lam[k] * v(j, k);
      out(i, j) = s;
    }
  return out;
}
}  // namespace

SymMatrix SymMatrix::sqrt_spd() const {
  std::vector<double> ev;
  SymMatrix vec;
  eigen_sym(ev, vec);
  for (double& l : ev) {
    if (l <= 0.0) throw domain_error("SymMatrix::sqrt_spd: matrix is not positive definite");
    l = std::sqrt(l);
  }
  return assemble(vec, ev);
}

SymMatrix SymMatrix::inverse_spd() const {
  std::vector<double> ev;
  SymMatrix vec;
  eigen_sym(ev, vec);
  for (double& l : ev) {
    if (l <= 0.0) throw domain_error("SymMatrix::inverse_spd: matrix is not positive definite");
    l = 1.0 / l;
  }
  return assemble(vec, ev);
}

// ---------------------------------------------------------------------------
// Stabilized sums

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) return -kInf;
  double m = -kInf;
  for (double x : v) m = std::max(m, x);
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

void LogSumExpAcc::add(double log_term) {
  if (log_term == -kInf) {
    ++n_;
    last_rel_ = 0.0;
    return;
  }
  if (n_ == 0 || sum_ == 0.0) {
    max_ = log_term;
    sum_ = 1.0;
    last_rel_ = 1.0;
  } else if (log_term > max_) {
    sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
    max_ = log_term;
    last_rel_ = 1.0 / sum_;
  } else {
    double t = std::exp(log_term - max_);
    sum_ += t;
    last_rel_ = t / sum_;
  }
  ++n_;
}

double LogSumExpAcc::value() const {
  if (n_ == 0 || sum_ == 0.0) return -kInf;
  return max_ + std::log(sum_);
}

// ---------------------------------------------------------------------------
// Theta sums

double theta_sum_direct(double a) {
  if (!(a > 0.0)) throw domain_error("theta_sum: need a > 0");
  double s = 1.0;
  for (int k = 1;; ++k) {
    double t = 2.0 * std::exp(-a * k * k);
    s += t;
    if (t < 1e-18 * s) break;
    if (k > 100000) throw numeric_error("theta_sum: no convergence (a too small)");
  }
  return s;
}

double theta_sum(double a) {
  if (!(a > 0.0)) throw domain_error("theta_sum: need a > 0");
  const double pi = 3.14159265358979323846;
  if (a < pi) return std::sqrt(pi / a) * theta_sum_direct(pi * pi / a);
  return theta_sum_direct(a);
}

double theta_sum_minus_one(double a) {
  if (!(a > 0.0)) throw domain_error("theta_sum_minus_one: need a > 0");
  double s = 0.0;
  for (int k = 1;; ++k) {
    double t = 2.0 * std::exp(-a * k * k);
    s += t;
    if (t < 1e-18 * (s + 1e-300)) break;
    if (k > 100000) throw numeric_error("theta_sum_minus_one: no convergence (a too small)");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Power-sum tail and zeta

double power_sum_tail(double s, double j0) {
  if (!(s > 1.0)) throw domain_error("power_sum_tail: need s > 1");
  if (!(j0 >= 1.0)) throw domain_error("power_sum_tail: need j0 >= 1");
  // Euler-Maclaurin around j0: sum_{j>=j0} j^-s
  double t1 = std::pow(j0, 1.0 - s) / (s - 1.0);
  double t2 = 0.5 * std::pow(j0, -s);
  double t3 = s / 12.0 * std::pow(j0, -s - 1.0);
  double t4 = -s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(j0, -s - 3.0);
  double t5 = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 * std::pow(j0, -s - 5.0);
  return t1 + t2 + t3 + t4 + t5;
}

double zeta(double s) {
  if (!(s > 1.0)) throw domain_error("zeta: need s > 1");
  double sum = 0.0;
  const int j0 = 64;
  for (int j = 1; j < j0; ++j) sum += std::pow(static_cast<double>(j), -s);
  return sum + power_sum_tail(s, j0);
}

// ---------------------------------------------------------------------------
// Regularized lower incomplete gamma

namespace {

double lower_gamma_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw numeric_error("regularized_lower_gamma: series did not converge");
}

double upper_gamma_cf(double a, double x) {
  // Lentz continued fraction for Q(a, x)
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16)
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw numeric_error("regularized_lower_gamma: continued fraction did not converge");
}

}  // namespace

double regularized_lower_gamma(double a, double x) {
  if (!(a > 0.0)) throw domain_error("regularized_lower_gamma: need a > 0");
  if (x < 0.0) throw domain_error("regularized_lower_gamma: need x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return lower_gamma_series(a, x);
  return 1.0 - upper_gamma_cf(a, x);
}

// ---------------------------------------------------------------------------
// Boundary series of the one-dimensional critical law

double theta_law_series_log(double theta, double s) {
  if (!(theta > 0.0)) throw domain_error("theta_law_series_log: need theta > 0");
  if (!(s > 0.0)) throw domain_error("theta_law_series_log: need s > 0");
  LogSumExpAcc acc;
  double log_c = 0.0;  // log of prod (2 theta + i - 1)/i
  const int n_min = static_cast<int>(2.0 * theta) + 4;
  double prev = kInf;
  for (int n = 0; n < 200000; ++n) {
    if (n > 0) log_c += std::log((2.0 * theta + n - 1.0) / n);
    double tn = theta + n;
    double log_term = log_c + std::log(tn) - tn * tn * s;
    acc.add(log_term);
    if (n >= n_min && log_term < prev && acc.last_relative() < 1e-16) {
      return acc.value();
    }
    prev = log_term;
  }
  throw numeric_error("theta_law_series_log: series did not converge");
}

// ---------------------------------------------------------------------------
// Adaptive Simpson

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(a, fa, m, fm, flm);
  double right = simpson(m, fm, b, fb, frm);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int max_depth) {
  if (a == b) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = simpson(a, fa, b, fb, fm);
  return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

// ---------------------------------------------------------------------------
// Worker pool sizing

int worker_count() {
  if (const char* env = std::getenv("SPRP_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw config_error("SPRP_THREADS must be a positive integer");
    return static_cast<int>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for_chunks(std::int64_t n,
                         const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  int workers = std::min<std::int64_t>(worker_count(), n);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::int64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    std::int64_t b = w * chunk;
    std::int64_t e = std::min<std::int64_t>(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace srp
