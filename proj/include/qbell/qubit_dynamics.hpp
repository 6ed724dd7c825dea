#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "qbell/model.hpp"
#include "qbell/specfun.hpp"

namespace qbell {

enum class Method { series, theta };
const char* to_string(Method m);

struct QubitStateRecord {
  double t = 0.0;
  Branch branch = Branch::plus;
  double zeta = 0.0;
  cplx xi = 0.0;
  double varpi = 0.0;    // sqrt(zeta^2 + |xi|^2)
  double s_vn = 0.0;     // von Neumann entropy, natural log
  double s_lin = 0.0;    // 1 - Tr rho_Q^2
  Method method = Method::series;
  bool validity_warning = false;
};

// Series evaluation of zeta(t) and xi(t).  Holds the mode table and the
// displaced-overlap table so that time sweeps reuse them.
class QubitSeries {
 public:
  explicit QubitSeries(const SystemParams& p);
  QubitSeries(const SystemParams& p, int n_max);

  const ModeSet& modes() const { return modes_; }
  int n_max() const { return modes_.n_max(); }

  double zeta(double t) const;
  cplx xi(double t, Branch b) const;

 private:
  ModeSet modes_;
  specfun::OverlapTable overlap_;
};

double zeta_series(const SystemParams& p, double t);
cplx xi_series(const SystemParams& p, double t, Branch b);

// Theta-function arguments at time t.
struct ThetaContext {
  double x = 0.0;
  double rho_sq = 0.0;
  double f = 0.0;    // x rho^2
  double tau = 0.0;  // delta_tilde t
  cplx q;            // exp(-1/(2 rho^2) - i x^2 tau / 4)
  cplx q_frak;       // exp(-1/(2 rho^2))
  cplx alpha_phase;  // alpha_hat e^{-i omega t}
  double tol = 1e-15;

  static ThetaContext build(const SystemParams& p, double t, double tol = 1e-15);

  cplx z(int j) const;       // (x (1 + (1 - j) x / 4) tau - i) / 2
  cplx z_frak(int j) const;  // -(j x^2 tau / 4 + i) / 2
  cplx phi(int j, int l) const;
  cplx phi_tilde(int j, double power = 1.0) const;
  double re_pow(int n) const;  // Re(alpha_hat^n e^{-i n omega t})
  double im_pow(int n) const;

  cplx th3(int j) const;
  cplx th4(int j) const;
  cplx th3_frak(int j) const;
  cplx th4_frak(int j) const;
};

// True when the parameters sit inside the region where the theta forms are
// trusted (small bias, rho_hat in [1.5, 2.5], strong but not ultra-strong coupling).
bool theta_in_validity_region(const SystemParams& p);

double zeta_theta(const SystemParams& p, double t);
cplx xi_theta(const SystemParams& p, double t, Branch b);
cplx xi_theta(const SystemParams& p, double t, Branch b, double zeta);

// Builds the full record, computing the entropies.  Throws NumericalError if
// varpi exceeds 1/2 by more than 1e-12.
QubitStateRecord make_record(double t, Branch b, double zeta, cplx xi, Method m);

QubitStateRecord qubit_record(const SystemParams& p, double t, Branch b, Method m);

double von_neumann_entropy(double varpi);
double linear_entropy(double varpi);

// (Tr rho_O^ell, Tr rho_Q^ell) with rho_O assembled in the Fock basis.
std::pair<double, double> trace_power_check(const SystemParams& p, double t, Branch b, int ell, int n_max = 0);

// Solves s = -x (log(x / n) - 1) for the root with x < n.
double min_entropy_fraction(double s, int n_cutoff);

}  // namespace qbell
