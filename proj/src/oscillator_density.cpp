#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "qbell/errors.hpp"
#include "qbell/oscillator_phase_space.hpp"

namespace qbell {

namespace {

// D(s) = exp(s (a^dag - a)) for real s on a truncated Fock space.
Eigen::MatrixXd displacement_matrix(double s, int dim) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n + 1 < dim; ++n) {
    const double r = std::sqrt(n + 1.0);
    g(n + 1, n) = s * r;
    g(n, n + 1) = -s * r;
  }
  return g.exp();
}

}  // namespace

Eigen::MatrixXcd oscillator_density(const SystemParams& p, double t, Branch b, int n_max, int margin) {
  if (n_max <= 0) n_max = mode_cutoff(p);
  if (margin < 2) throw InvalidInput("oscillator_phase_space::density", "margin too small");
  const int dim = n_max + 1 + margin;

  ModeSet modes(p, n_max);
  std::vector<cplx> a, bm;
  modes.amplitudes(t, b, a, bm);
  Eigen::VectorXcd phi_up = Eigen::VectorXcd::Zero(dim), phi_dn = Eigen::VectorXcd::Zero(dim);
  for (int n = 0; n <= n_max; ++n) {
    phi_up(n) = a[static_cast<std::size_t>(n)];
    phi_dn(n) = bm[static_cast<std::size_t>(n)];
  }

  const double d = p.displacement;
  // |n+> = D(-d)|n>, |n-> = D(d)|n>
  const Eigen::VectorXcd up = displacement_matrix(-d, dim).cast<cplx>() * phi_up;
  const Eigen::VectorXcd dn = displacement_matrix(d, dim).cast<cplx>() * phi_dn;

  // Weight pushed into the upper half of the margin signals truncation damage.
  const int guard = n_max + 1 + margin / 2;
  const double leak = up.tail(dim - guard).squaredNorm() + dn.tail(dim - guard).squaredNorm();
  if (leak > 1e-8)
    throw NumericalError("oscillator_phase_space::density",
                         "displacement leaks " + std::to_string(leak) + " into the truncation margin");

  return up * up.adjoint() + dn * dn.adjoint();
}

}  // namespace qbell
