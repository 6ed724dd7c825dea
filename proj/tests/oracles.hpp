#pragma once

// Independent reference computations used only by the tests.  They avoid the
// closed forms in the library: Laguerre values come from the explicit finite
// sum, displacement matrix elements from a matrix exponential, the state from
// per-block 2x2 propagators.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qbell/model.hpp"

namespace oracle {

using cplx = std::complex<double>;

// L_n^j(x) = sum_k (-1)^k C(n+j, n-k) x^k / k!, in long double.
inline double laguerre_sum(int n, int j, double x) {
  long double acc = 0.0L;
  for (int k = 0; k <= n; ++k) {
    const long double lb = std::lgamma(static_cast<long double>(n + j + 1)) - std::lgamma(static_cast<long double>(n - k + 1)) -
                           std::lgamma(static_cast<long double>(j + k + 1)) - std::lgamma(static_cast<long double>(k + 1));
    long double term = std::exp(lb) * std::pow(static_cast<long double>(x), k);
    acc += (k % 2 == 0) ? term : -term;
  }
  return static_cast<double>(acc);
}

// exp(s (a^dag - a)) on a Fock space of size dim.
inline Eigen::MatrixXd displacement(double s, int dim) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n + 1 < dim; ++n) {
    g(n + 1, n) = s * std::sqrt(n + 1.0);
    g(n, n + 1) = -s * std::sqrt(n + 1.0);
  }
  return g.exp();
}

// exp(-i H t) for a real symmetric 2x2 H.
inline Eigen::Matrix2cd propagator(const Eigen::Matrix2d& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
  Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
  for (int k = 0; k < 2; ++k) d(k, k) = std::polar(1.0, -es.eigenvalues()(k) * t);
  return es.eigenvectors().cast<cplx>() * d * es.eigenvectors().transpose().cast<cplx>();
}

struct State {
  std::vector<cplx> up;  // amplitudes on |1, n+>
  std::vector<cplx> dn;  // amplitudes on |-1, n->
};

// Adiabatic dynamics: each block {|1,n+>, |-1,n->} is propagated exactly.
// The off-diagonal element -(delta/2) <n+|n-> is taken from the displacement matrix.
inline State evolve(const qbell::SystemParams& p, double t, qbell::Branch b, int n_max) {
  const int dim = n_max + 40;
  const Eigen::MatrixXd d2 = displacement(2.0 * p.displacement, dim);  // <n+|n-> = <n|D(2d)|n>
  const double s = qbell::sign_of(b);
  State st;
  for (int n = 0; n <= n_max; ++n) {
    const double logmag = -0.5 * p.rho_hat * p.rho_hat + n * std::log(p.rho_hat) - 0.5 * std::lgamma(n + 1.0);
    const cplx c = std::polar(std::exp(logmag) / std::sqrt(2.0), n * std::arg(p.alpha_hat));
    const Eigen::Vector2cd v0(c, s * ((n % 2) ? -1.0 : 1.0) * c);
    Eigen::Matrix2d h;
    const double off = -0.5 * p.delta * d2(n, n);
    const double e0 = n * p.omega - p.lambda * p.lambda / p.omega;
    h << e0 - p.eps_tilde, off, off, e0 + p.eps_tilde;
    const Eigen::Vector2cd v = propagator(h, t) * v0;
    st.up.push_back(v(0));
    st.dn.push_back(v(1));
  }
  return st;
}

// Qubit reduced density matrix from the evolved state, basis (|1>, |-1>).
inline Eigen::Matrix2cd qubit_density(const qbell::SystemParams& p, const State& st) {
  const int n = static_cast<int>(st.up.size());
  const int dim = n + 40;
  const Eigen::MatrixXd dm = displacement(-2.0 * p.displacement, dim);  // <m-|n+> = <m|D(-2d)|n>
  Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
  for (int k = 0; k < n; ++k) {
    r(0, 0) += std::norm(st.up[k]);
    r(1, 1) += std::norm(st.dn[k]);
  }
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m) r(0, 1) += st.up[i] * std::conj(st.dn[m]) * dm(m, i);
  r(1, 0) = std::conj(r(0, 1));
  return r;
}

// Q(beta) = <beta| rho |beta> / pi for a Fock-basis density matrix.
inline double husimi_from_density(const Eigen::MatrixXcd& rho, cplx beta) {
  const int dim = static_cast<int>(rho.rows());
  Eigen::VectorXcd coh(dim);
  coh(0) = std::exp(-0.5 * std::norm(beta));
  for (int n = 1; n < dim; ++n) coh(n) = coh(n - 1) * beta / std::sqrt(static_cast<double>(n));
  return (coh.adjoint() * rho * coh)(0, 0).real() / std::numbers::pi;
}

// Composite Simpson rule on a square, for checks independent of the library grids.
template <class F>
double simpson2d(F f, double lo, double hi, int n) {
  if (n % 2) ++n;
  const double h = (hi - lo) / n;
  auto w = [n](int i) { return (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0); };
  double acc = 0.0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) acc += w(i) * w(j) * f(lo + i * h, lo + j * h);
  return acc * h * h / 9.0;
}

}  // namespace oracle
