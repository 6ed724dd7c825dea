#include <cmath>
#include <numbers>

#include "qbell/errors.hpp"
#include "qbell/qubit_dynamics.hpp"

namespace qbell {

ThetaContext ThetaContext::build(const SystemParams& p, double t, double tol) {
  if (!(p.rho_hat > 0.0)) throw NumericalError("qubit_dynamics::theta", "closed forms need |alpha_hat| > 0");
  ThetaContext c;
  c.x = p.x;
  c.rho_sq = p.rho_hat * p.rho_hat;
  c.f = c.x * c.rho_sq;
  c.tau = p.delta_tilde * t;
  c.q = std::exp(cplx(-0.5 / c.rho_sq, -0.25 * c.x * c.x * c.tau));
  c.q_frak = std::exp(-0.5 / c.rho_sq);
  c.alpha_phase = p.alpha_hat * std::polar(1.0, -p.omega * t);
  c.tol = tol;
  return c;
}

cplx ThetaContext::z(int j) const { return 0.5 * cplx(x * (1.0 + (1 - j) * x / 4.0) * tau, -1.0); }

cplx ThetaContext::z_frak(int j) const { return -0.5 * cplx(j * x * x * tau / 4.0, 1.0); }

cplx ThetaContext::phi(int j, int l) const { return std::polar(1.0, -tau * (1.0 - j * x / 2.0 + l * x * x / 4.0)); }

cplx ThetaContext::phi_tilde(int j, double power) const { return std::polar(1.0, power * tau * x * (1.0 - j * x / 4.0)); }

double ThetaContext::re_pow(int n) const { return std::pow(alpha_phase, n).real(); }
double ThetaContext::im_pow(int n) const { return std::pow(alpha_phase, n).imag(); }

cplx ThetaContext::th3(int j) const { return specfun::theta3(q, z(j), tol); }
cplx ThetaContext::th4(int j) const { return specfun::theta4(q, z(j), tol); }
cplx ThetaContext::th3_frak(int j) const { return specfun::theta3(q_frak, z_frak(j), tol); }
cplx ThetaContext::th4_frak(int j) const { return specfun::theta4(q_frak, z_frak(j), tol); }

bool theta_in_validity_region(const SystemParams& p) {
  return p.epsilon / p.delta_tilde <= 0.2 && p.rho_hat >= 1.5 && p.rho_hat <= 2.5 && p.displacement <= 0.2;
}

double zeta_theta(const SystemParams& p, double t) {
  const auto c = ThetaContext::build(p, t);
  const double x = c.x, f = c.f, r2 = c.rho_sq;
  const cplx big = c.phi(0, 0) * c.th4(0) - f * (1.0 + x) * c.phi(2, 0) * c.th4(2) + 0.75 * f * f * c.phi(4, 2) * c.th4(4);
  const double stat = std::exp(-2.0 * r2) * (1.0 - f * (1.0 + x) + 0.75 * f * f);
  const double osc = std::exp(-0.5 * r2) / std::sqrt(2.0 * std::numbers::pi * r2) * big.real();
  return -p.epsilon / (2.0 * p.delta_tilde) * (stat - osc);
}

cplx xi_theta(const SystemParams& p, double t, Branch b) { return xi_theta(p, t, b, zeta_theta(p, t)); }

cplx xi_theta(const SystemParams& p, double t, Branch b, double zeta) {
  const auto c = ThetaContext::build(p, t);
  const double x = c.x, f = c.f, r2 = c.rho_sq;
  const double e = p.epsilon, dt = p.delta_tilde;
  const double s = sign_of(b);
  const double sx = std::sqrt(x);
  const double x32 = x * sx;
  const cplx I(0.0, 1.0);

  // theta values reused across blocks
  const cplx t4_0 = c.th4(0), t4_1 = c.th4(1), t4_2 = c.th4(2), t4_3 = c.th4(3), t4_4 = c.th4(4);
  const cplx t3_1 = c.th3(1), t3_2 = c.th3(2), t3_3 = c.th3(3);
  const cplx f4_2 = c.th4_frak(2), f4_4 = c.th4_frak(4), f4_1 = c.th4_frak(1);
  const cplx f3_1 = c.th3_frak(1), f3_2 = c.th3_frak(2), f3_3 = c.th3_frak(3), f3_4 = c.th3_frak(4);
  const cplx pt1 = c.phi_tilde(1), pt3 = c.phi_tilde(3), pt3sq = c.phi_tilde(3, 2.0);
  const cplx ph0h = c.phi_tilde(0, 0.5), ph2h = c.phi_tilde(2, 0.5), ph1_32 = c.phi_tilde(1, 1.5);
  const double R1 = c.re_pow(1), R2 = c.re_pow(2), R3 = c.re_pow(3), R4 = c.re_pow(4);
  const double I1 = c.im_pow(1), I2 = c.im_pow(2), I3 = c.im_pow(3), I4 = c.im_pow(4);

  const cplx a_blk = sx * R1 * (c.phi(1, 0) * t4_1 + f / 2.0 * c.phi(3, 1) * t4_3).real() +
                     x / 2.0 * R2 * ((pt1 + f / 3.0 * pt3) * f4_2).real() +
                     x32 / 6.0 * R3 * (c.phi(3, 3) * t4_3).real() + x * x / 24.0 * R4 * (pt3sq * f4_4).real() -
                     I * e / (2.0 * dt) * (c.phi(0, 0) * t4_0).imag();

  const double b_blk =
      e * e / (dt * dt) *
      (x * R2 *
           ((0.5 + x) * c.phi(2, 2) * t4_2 - 5.0 * f / 6.0 * c.phi(4, 3) * t4_4 -
            ((0.5 + x) * pt1 - 5.0 * f / 6.0 * pt3) * f4_2)
               .real() +
       x * x / 24.0 * R4 * (c.phi(4, 6) * t4_4 - pt3sq * f4_4).real());

  const cplx c_blk =
      -s * I * e / dt *
      (sx * I1 *
           ((1.0 + x / 2.0) * c.phi(1, 0) * t3_1 + f / 2.0 * c.phi(3, 1) * t3_3 -
            ((1.0 + x / 2.0) * ph0h + f / 2.0 * ph2h) * f3_1)
               .real() +
       x * x / 2.0 * I2 * (c.phi(2, 2) * t3_2 - pt1 * f3_2).real() +
       x32 / 6.0 * I3 * (c.phi(3, 3) * t3_3 - ph1_32 * f3_3).real());

  const cplx d_blk =
      -I * e / dt *
      (sx * R1 * ((1.0 + x / 2.0) * c.phi(1, 0) * t4_1 - f / 2.0 * c.phi(3, 1) * t4_3 + x / 2.0 * ph0h * f4_1).imag() +
       x * R2 * (0.5 * (1.0 + x) * c.phi(2, 2) * t4_2 - f / 3.0 * c.phi(4, 3) * t4_4 + x / 2.0 * pt1 * f4_2).imag() +
       x32 / 6.0 * R3 * (c.phi(3, 3) * t4_3).imag() + x * x / 24.0 * R4 * (c.phi(4, 6) * t4_4).imag());

  const double e_blk =
      -s * (sx * I1 * (c.phi(1, 0) * t3_1 - f / 2.0 * c.phi(3, 1) * t3_3).imag() -
            x / 2.0 * I2 * ((pt1 - f / 3.0 * pt3) * f3_2).imag() + x32 / 6.0 * I3 * (c.phi(3, 3) * t3_3).imag() -
            x * x / 24.0 * I4 * (pt3sq * f3_4).imag());

  const double et = e / 2.0;
  const double f_blk =
      s * 2.0 * et * et / (dt * dt) *
      (sx * I1 * ((1.0 + x) * c.phi(1, 0) * t3_1 + 1.5 * f * c.phi(3, 1) * t3_3 - x * ph0h * f3_1).imag() -
       x * I2 * (x * c.phi(2, 2) * t3_2 - ((0.5 + x) * pt1 + 5.0 * f / 6.0 * pt3) * f3_2).imag() +
       x32 / 6.0 * I3 * (c.phi(3, 3) * t3_3).imag() - x * x / 24.0 * I4 * (pt3sq * f3_4).imag());

  const double base = 0.5 * (1.0 + f + f * f / 4.0) * std::exp(-2.0 * r2 - x / 2.0) + e / p.delta * zeta;
  const double pre = std::exp(-(x + r2) / 2.0) / std::sqrt(2.0 * std::numbers::pi * r2);
  return base + pre * (a_blk + b_blk + c_blk + d_blk + e_blk + f_blk);
}

}  // namespace qbell
