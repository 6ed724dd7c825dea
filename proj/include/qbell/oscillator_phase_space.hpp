#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qbell/model.hpp"
#include "qbell/quadrature.hpp"

namespace qbell {

// rho_O in the Fock basis, dimension n_max + 1 + margin.  Built from the two
// displaced conditional states; throws NumericalError if the displacement matrix
// loses unitarity on the used block by more than 1e-8.
Eigen::MatrixXcd oscillator_density(const SystemParams& p, double t, Branch b, int n_max = 0, int margin = 20);

// Evaluates Q(beta) at fixed (t, branch).  The Fourier sums are carried with the
// Gaussian prefactor folded into the running term.
class HusimiSeries {
 public:
  // radius: largest |beta| that will be requested; sets the coefficient cache.
  HusimiSeries(const SystemParams& p, double t, Branch b, double radius = 0.0);

  double operator()(cplx beta) const;

 private:
  cplx sum(const std::vector<cplx>& coef, cplx w) const;
  void extend(int n_max);

  SystemParams p_;
  double t_;
  Branch b_;
  cplx alpha_rot_;  // alpha_hat e^{-i omega t}
  std::vector<cplx> cx_;  // C_n^b
  std::vector<cplx> cy_;  // (-1)^n conj(C_n^{-b})
};

double q_series(const SystemParams& p, double t, Branch b, cplx beta);

// Closed form built on the linear-Laguerre approximation L_n(x) ~ 1 - n x.
double q_linear(const SystemParams& p, double t, Branch b, cplx beta);

enum class MomentMethod { series, theta, quadrature };
const char* to_string(MomentMethod m);

struct MomentRecord {
  double t = 0.0;
  Branch branch = Branch::plus;
  double e1 = 0.0, b1 = 0.0;  // <E>, <B>
  double e2 = 0.0, b2 = 0.0;  // <E^2>, <B^2>
  double uncertainty = 0.0;   // sqrt(Var E Var B)
  MomentMethod method = MomentMethod::series;

  double var_e() const { return e2 - e1 * e1; }
  double var_b() const { return b2 - b1 * b1; }
};

// E = (a - a^dag) / (sqrt(2) i),  B = (a + a^dag) / sqrt(2).
MomentRecord moments_series(const SystemParams& p, double t, Branch b);
MomentRecord moments_theta(const SystemParams& p, double t, Branch b);
MomentRecord moments_quadrature(const QGrid& grid);

double uncertainty_product(double e1, double b1, double e2, double b2);

}  // namespace qbell
