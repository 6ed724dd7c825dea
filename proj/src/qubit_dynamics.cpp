#include "qbell/qubit_dynamics.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>

#include <Eigen/Dense>

#include "qbell/errors.hpp"
#include "qbell/oscillator_phase_space.hpp"

namespace qbell {

const char* to_string(Method m) { return m == Method::series ? "series" : "theta"; }

QubitSeries::QubitSeries(const SystemParams& p) : QubitSeries(p, mode_cutoff(p)) {}

QubitSeries::QubitSeries(const SystemParams& p, int n_max) : modes_(p, n_max), overlap_(n_max, p.x) {}

double QubitSeries::zeta(double t) const {
  double acc = 0.0;
  for (int n = 0; n <= modes_.n_max(); ++n) {
    const auto& bs = modes_.block(n);
    acc += bs.parity() * modes_.weight(n) * bs.delta_n * bs.sin2_over_chi2(t);
  }
  return modes_.params().eps_tilde * acc;
}

cplx QubitSeries::xi(double t, Branch b) const {
  const auto& p = modes_.params();
  const int nm = modes_.n_max();
  const double arg = std::arg(p.alpha_hat);
  std::vector<cplx> u(static_cast<std::size_t>(nm) + 1), v(static_cast<std::size_t>(nm) + 1);
  for (int n = 0; n <= nm; ++n) {
    const auto& bs = modes_.block(n);
    const double mag = std::sqrt(modes_.weight(n));  // e^{-rho^2/2} rho^n / sqrt(n!)
    const double ph = n * (arg - p.omega * t);
    u[n] = std::polar(mag, ph) * bs.c_coefficient(t, b);
    v[n] = static_cast<double>(bs.parity()) * std::polar(mag, -ph) * bs.c_coefficient(t, opposite(b));
  }
  cplx acc = 0.0;
  for (int m = 0; m <= nm; ++m) {
    cplx row = 0.0;
    for (int n = 0; n <= nm; ++n) row += overlap_(m, n) * u[n];
    acc += v[m] * row;
  }
  return 0.5 * acc;
}

double zeta_series(const SystemParams& p, double t) { return QubitSeries(p).zeta(t); }

cplx xi_series(const SystemParams& p, double t, Branch b) { return QubitSeries(p).xi(t, b); }

double von_neumann_entropy(double varpi) {
  auto h = [](double v) { return v > 0.0 ? -v * std::log(v) : 0.0; };
  return h(0.5 + varpi) + h(0.5 - varpi);
}

double linear_entropy(double varpi) { return 0.5 - 2.0 * varpi * varpi; }

QubitStateRecord make_record(double t, Branch b, double zeta, cplx xi, Method m) {
  QubitStateRecord r;
  r.t = t;
  r.branch = b;
  r.zeta = zeta;
  r.xi = xi;
  r.method = m;
  double w = std::sqrt(zeta * zeta + std::norm(xi));
  if (w > 0.5) {
    if (w - 0.5 > 1e-12)
      throw NumericalError("qubit_dynamics::make_record", "Bloch radius exceeds 1/2 (varpi = " + std::to_string(w) + ")");
    w = 0.5;
  }
  r.varpi = w;
  r.s_vn = von_neumann_entropy(w);
  r.s_lin = linear_entropy(w);
  return r;
}

QubitStateRecord qubit_record(const SystemParams& p, double t, Branch b, Method m) {
  if (m == Method::series) {
    QubitSeries s(p);
    return make_record(t, b, s.zeta(t), s.xi(t, b), m);
  }
  const double z = zeta_theta(p, t);
  auto r = make_record(t, b, z, xi_theta(p, t, b, z), m);
  r.validity_warning = !theta_in_validity_region(p);
  return r;
}

std::pair<double, double> trace_power_check(const SystemParams& p, double t, Branch b, int ell, int n_max) {
  if (ell < 1) throw InvalidInput("qubit_dynamics::trace_power_check", "ell must be >= 1");
  if (n_max <= 0) n_max = mode_cutoff(p);
  const Eigen::MatrixXcd rho_o = oscillator_density(p, t, b, n_max);

  QubitSeries s(p, n_max);
  const double z = s.zeta(t);
  const cplx xi = s.xi(t, b);
  const double sg = sign_of(b);
  Eigen::Matrix2cd rho_q;
  rho_q << 0.5 - sg * z, sg * xi, sg * std::conj(xi), 0.5 + sg * z;

  Eigen::MatrixXcd po = rho_o;
  Eigen::Matrix2cd pq = rho_q;
  for (int k = 1; k < ell; ++k) {
    po = po * rho_o;
    pq = pq * rho_q;
  }
  return {po.trace().real(), pq.trace().real()};
}

double min_entropy_fraction(double s, int n_cutoff) {
  if (n_cutoff < 1) throw InvalidInput("qubit_dynamics::min_entropy_fraction", "cutoff must be >= 1");
  const double nn = n_cutoff;
  if (!(s > 0.0) || !(s < nn)) throw InvalidInput("qubit_dynamics::min_entropy_fraction", "entropy must lie in (0, N)");
  auto g = [&](double x) { return x * (1.0 + std::log(nn) - std::log(x)) - s; };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t it = 200;
  const auto r = boost::math::tools::toms748_solve(g, 1e-300, nn, g(1e-300), g(nn), tol, it);
  return 0.5 * (r.first + r.second);
}

}  // namespace qbell
