#pragma once

#include <complex>
#include <vector>

namespace qbell::specfun {

using cplx = std::complex<double>;

double log_factorial(int n);

// Generalized Laguerre polynomial L_n^j(x), forward three-term recurrence.
double laguerre(int n, int j, double x);

// All L_k^j(x) for k = 0..n.
std::vector<double> laguerre_sequence(int n, int j, double x);

// <m-|n+> where |n+-> = D(-+sqrt(x)/2)|n>.  Equals <m|D(-sqrt(x))|n>.
double displaced_overlap(int m, int n, double x);

// Dense table of displaced_overlap(m, n, x) for 0 <= m, n <= n_max.
class OverlapTable {
 public:
  OverlapTable() = default;
  OverlapTable(int n_max, double x);

  int n_max() const { return n_max_; }
  double x() const { return x_; }
  double operator()(int m, int n) const { return data_[static_cast<std::size_t>(m) * (n_max_ + 1) + n]; }

 private:
  int n_max_ = -1;
  double x_ = 0.0;
  std::vector<double> data_;
};

// theta_3(q, z) = sum_n q^{n^2} e^{2inz},  theta_4(q, z) = sum_n (-1)^n q^{n^2} e^{2inz}.
// Symmetric truncation at N terms on each side; throws NumericalError for |q| >= 1
// or when the peak term would overflow.
cplx theta3(cplx q, cplx z, double tol = 1e-15);
cplx theta4(cplx q, cplx z, double tol = 1e-15);

// Number of terms on each side needed for theta3/theta4 to reach tol.
int theta_terms(cplx q, cplx z, double tol = 1e-15);

// Poisson weight e^{-r} r^n / n!.
double poisson_weight(int n, double rate);
double log_poisson_weight(int n, double rate);

// Smallest n such that the Poisson(rate) cumulative weight of 0..n reaches 1 - tail,
// and n is at least the mode.
int poisson_cutoff(double rate, double tail);

}  // namespace qbell::specfun
