#include <cmath>
#include <numbers>

#include "qbell/errors.hpp"
#include "qbell/oscillator_phase_space.hpp"
#include "qbell/qubit_dynamics.hpp"

namespace qbell {

const char* to_string(MomentMethod m) {
  switch (m) {
    case MomentMethod::series: return "series";
    case MomentMethod::theta: return "theta";
    case MomentMethod::quadrature: return "quadrature";
  }
  return "?";
}

double uncertainty_product(double e1, double b1, double e2, double b2) {
  const double prod = (e2 - e1 * e1) * (b2 - b1 * b1);
  if (prod < -1e-12) throw NumericalError("oscillator_phase_space::uncertainty", "negative variance product");
  return std::sqrt(std::max(prod, 0.0));
}

MomentRecord moments_series(const SystemParams& p, double t, Branch b) {
  const QubitSeries qs(p, mode_cutoff(p) + 2);
  const ModeSet& modes = qs.modes();
  const int nm = modes.n_max();
  const auto cs = modes.coefficients(t, b);
  const auto co = modes.coefficients(t, opposite(b));
  const cplx ap = p.alpha_hat * std::polar(1.0, -p.omega * t);
  const cplx ap2 = ap * ap;

  // G_{n;l} (sign +1) and script-G_{n;l} (sign -1)
  auto g = [&](int n, int l, double sign) {
    return cs[n + l] * std::conj(cs[n]) + sign * std::conj(co[n + l]) * co[n];
  };
  double s_e1 = 0.0, s_b1 = 0.0, s_g2 = 0.0, s_g1 = 0.0;
  for (int n = 0; n + 1 <= nm; ++n) {
    const double w = modes.weight(n);
    const cplx gm1 = ap * g(n, 1, -1.0);
    const cplx gp1 = ap * g(n, 1, 1.0);
    s_e1 += w * gm1.imag();
    s_b1 += w * gm1.real();
    s_g1 += w * gp1.real();
    if (n + 2 <= nm) s_g2 += w * (ap2 * g(n, 2, 1.0)).real();
  }
  const double r2 = p.rho_hat * p.rho_hat;
  MomentRecord r;
  r.t = t;
  r.branch = b;
  r.method = MomentMethod::series;
  r.e1 = s_e1 / std::numbers::sqrt2;
  r.b1 = s_b1 / std::numbers::sqrt2 + sign_of(b) * std::sqrt(2.0 * p.x) * qs.zeta(t);
  r.e2 = r2 + 0.5 * (1.0 - s_g2);
  r.b2 = r2 + 0.5 * (1.0 + p.x + s_g2 - 2.0 * std::sqrt(p.x) * s_g1);
  r.uncertainty = uncertainty_product(r.e1, r.b1, r.e2, r.b2);
  return r;
}

MomentRecord moments_theta(const SystemParams& p, double t, Branch b) {
  const auto c = ThetaContext::build(p, t);
  const double x = c.x, f = c.f, r2 = c.rho_sq, e = p.epsilon, dt = p.delta_tilde;
  const double s = sign_of(b);
  const double zeta = zeta_theta(p, t);
  auto sq = [&](int j) { return c.phi_tilde(j, 0.5); };

  const cplx t3f1 = c.th3_frak(1), t4f1 = c.th4_frak(1), t3f2 = c.th3_frak(2), t4f2 = c.th4_frak(2);
  const cplx t3_1 = c.th3(1), t3_2 = c.th3(2), t3_3 = c.th3(3);
  const cplx t4_1 = c.th4(1), t4_2 = c.th4(2), t4_3 = c.th4(3), t4_4 = c.th4(4);

  const cplx tt = ((2.0 + x + x * x) * sq(0) + (2.0 + 3.5 * x) * f * sq(2) + 1.5 * f * f * sq(4)) * t3f1 +
                  x * (1.0 + x) * c.phi(1, 0) * t3_1 + 1.5 * x * f * c.phi(3, 1) * t3_3;
  const cplx hh = (x * (1.0 + x) * sq(0) - 1.5 * x * f * sq(2)) * t4f1 - x * (1.0 + x) * c.phi(1, 0) * t4_1 +
                  1.5 * x * f * c.phi(3, 1) * t4_3;
  const double pre1 = e / dt * std::exp(-0.5 * r2) / std::sqrt(4.0 * std::numbers::pi * r2);
  const double R1 = c.re_pow(1), I1 = c.im_pow(1), R2 = c.re_pow(2), I2 = c.im_pow(2);

  MomentRecord r;
  r.t = t;
  r.branch = b;
  r.method = MomentMethod::theta;
  r.e1 = -pre1 * (R1 * tt.imag() - s * I1 * hh.real());
  r.b1 = pre1 * (I1 * tt.imag() + s * R1 * hh.real()) + s * std::sqrt(2.0 * x) * zeta;

  const double k = e * e / (dt * dt);
  const cplx ct = (1.0 - k * x * x) * c.phi_tilde(1) * t3f2 + k * x * x * c.phi(2, 1) * t3_2;
  const cplx ch = ((1.0 - k / 2.0 * (1.0 + 2.0 * x + 5.5 * x * x)) * c.phi_tilde(1) + k * f * (1.0 + 4.0 * x) * c.phi_tilde(3) -
                   1.25 * k * f * f * c.phi_tilde(5)) *
                      t4f2 -
                  k * x * (1.0 + 2.75 * x) * c.phi(2, 1) * t4_2 + 2.5 * k * x * f * c.phi(4, 3) * t4_4;
  const cplx bt = (1.0 - k * (1.0 + x)) * c.phi(1, 0) * t3_1 - 2.0 * k * f * c.phi(3, 1) * t3_3 +
                  k * ((1.0 + x) * sq(0) + 2.0 * f * sq(2)) * t3f1;
  const cplx bh = (1.0 - k / 2.0 * (1.0 + x)) * c.phi(1, 0) * t4_1 + k * f * c.phi(3, 1) * t4_3 - k / 2.0 * x * sq(0) * t4f1;
  const double pre2 = std::exp(-0.5 * r2) / std::sqrt(2.0 * std::numbers::pi * r2);
  const double two = R2 * ct.real() + s * I2 * ch.imag();
  r.e2 = 0.5 + r2 - pre2 * two;
  r.b2 = 0.5 * (1.0 + x) + r2 + pre2 * (two - 2.0 * std::sqrt(x) * (R1 * bt.real() - s * I1 * bh.imag()));
  r.uncertainty = uncertainty_product(r.e1, r.b1, r.e2, r.b2);
  return r;
}

MomentRecord moments_quadrature(const QGrid& grid) {
  MomentRecord r;
  r.t = grid.t;
  r.branch = grid.branch;
  r.method = MomentMethod::quadrature;
  const double s2 = std::numbers::sqrt2;
  double e1 = 0.0, b1 = 0.0, e2 = 0.0, b2 = 0.0;
  for (int i = 0; i < grid.n_re(); ++i) {
    const double re = grid.re.nodes[i];
    for (int j = 0; j < grid.n_im(); ++j) {
      const double im = grid.im.nodes[j];
      const double w = grid.re.weights[i] * grid.im.weights[j] * grid.values(i, j);
      e1 += w * s2 * im;
      b1 += w * s2 * re;
      e2 += w * (2.0 * im * im - 0.5);
      b2 += w * (2.0 * re * re - 0.5);
    }
  }
  r.e1 = e1;
  r.b1 = b1;
  r.e2 = e2;
  r.b2 = b2;
  r.uncertainty = uncertainty_product(e1, b1, e2, b2);
  return r;
}

}  // namespace qbell
