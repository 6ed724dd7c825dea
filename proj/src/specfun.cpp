#include "qbell/specfun.hpp"

#include <cmath>
#include <limits>

#include "qbell/errors.hpp"

namespace qbell::specfun {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double laguerre(int n, int j, double x) {
  if (n < 0) throw InvalidInput("specfun::laguerre", "negative degree");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + j - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + j - x) * cur - (k + j) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> laguerre_sequence(int n, int j, double x) {
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  out[0] = 1.0;
  if (n >= 1) out[1] = 1.0 + j - x;
  for (int k = 1; k < n; ++k)
    out[k + 1] = ((2.0 * k + 1.0 + j - x) * out[k] - (k + j) * out[k - 1]) / (k + 1.0);
  return out;
}

double displaced_overlap(int m, int n, double x) {
  if (x < 0.0) throw InvalidInput("specfun::displaced_overlap", "x must be non-negative");
  if (x == 0.0) return m == n ? 1.0 : 0.0;
  const int lo = std::min(m, n);
  const int k = std::abs(m - n);
  const double sign = (m > n && (k % 2 == 1)) ? -1.0 : 1.0;
  const double logmag = -0.5 * x + 0.5 * k * std::log(x) + 0.5 * (log_factorial(lo) - log_factorial(lo + k));
  return sign * std::exp(logmag) * laguerre(lo, k, x);
}

OverlapTable::OverlapTable(int n_max, double x) : n_max_(n_max), x_(x) {
  const std::size_t dim = static_cast<std::size_t>(n_max) + 1;
  data_.assign(dim * dim, 0.0);
  if (x == 0.0) {
    for (std::size_t i = 0; i < dim; ++i) data_[i * dim + i] = 1.0;
    return;
  }
  const double lx = std::log(x);
  for (int k = 0; k <= n_max; ++k) {
    const auto lag = laguerre_sequence(n_max - k, k, x);
    for (int lo = 0; lo + k <= n_max; ++lo) {
      const double mag =
          std::exp(-0.5 * x + 0.5 * k * lx + 0.5 * (log_factorial(lo) - log_factorial(lo + k))) * lag[lo];
      // m = lo + k >= n = lo carries (-1)^k
      data_[static_cast<std::size_t>(lo + k) * dim + lo] = (k % 2 == 1) ? -mag : mag;
      data_[static_cast<std::size_t>(lo) * dim + lo + k] = mag;
    }
  }
}

namespace {

cplx theta_sum(cplx q, cplx z, double tol, bool alternating) {
  if (q == cplx(0.0, 0.0)) return 1.0;
  const int n_terms = theta_terms(q, z, tol);
  const cplx lq = std::log(q);
  cplx acc = 0.0;
  for (int n = n_terms; n >= 1; --n) {
    const double nn = static_cast<double>(n);
    const cplx base = nn * nn * lq;
    const cplx two_inz = cplx(0.0, 2.0 * nn) * z;
    cplx term = std::exp(base + two_inz) + std::exp(base - two_inz);
    if (alternating && (n % 2 == 1)) term = -term;
    acc += term;
  }
  return 1.0 + acc;
}

}  // namespace

int theta_terms(cplx q, cplx z, double tol) {
  const double aq = std::abs(q);
  if (!(aq < 1.0)) throw NumericalError("specfun::theta", "nome must satisfy |q| < 1");
  if (aq == 0.0) return 0;
  const double a = -std::log(aq);
  const double b = 2.0 * std::abs(z.imag());
  const double log_peak = b * b / (4.0 * a);
  if (log_peak > 650.0) throw NumericalError("specfun::theta", "term magnitude grows beyond range (|Im z| too large for |q|)");
  const double c = -std::log(tol) + log_peak;
  const double n = (b + std::sqrt(b * b + 4.0 * a * c)) / (2.0 * a);
  if (!(n < 1e6)) throw NumericalError("specfun::theta", "truncation exceeds term budget");
  return std::max(1, static_cast<int>(std::ceil(n)));
}

cplx theta3(cplx q, cplx z, double tol) { return theta_sum(q, z, tol, false); }
cplx theta4(cplx q, cplx z, double tol) { return theta_sum(q, z, tol, true); }

double log_poisson_weight(int n, double rate) {
  if (rate == 0.0) return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return -rate + n * std::log(rate) - log_factorial(n);
}

double poisson_weight(int n, double rate) {
  if (rate < 0.0) throw InvalidInput("specfun::poisson_weight", "negative rate");
  return std::exp(log_poisson_weight(n, rate));
}

int poisson_cutoff(double rate, double tail) {
  if (rate < 0.0) throw InvalidInput("specfun::poisson_cutoff", "negative rate");
  if (rate == 0.0) return 0;
  const int mode = static_cast<int>(std::floor(rate));
  // Sum the upper tail directly; it is small and avoids cancellation in 1 - cumulative.
  int n = mode;
  for (;; ++n) {
    double upper = 0.0;
    for (int k = n + 1;; ++k) {
      const double w = poisson_weight(k, rate);
      upper += w;
      if (w < 1e-3 * tail * 1e-3 || k > n + 10000) break;
    }
    if (upper <= tail) return n;
    if (n > mode + 100000) throw NumericalError("specfun::poisson_cutoff", "no cutoff found");
  }
}

}  // namespace qbell::specfun
