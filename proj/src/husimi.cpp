#include <cmath>
#include <numbers>

#include "qbell/errors.hpp"
#include "qbell/oscillator_phase_space.hpp"
#include "qbell/specfun.hpp"

namespace qbell {

HusimiSeries::HusimiSeries(const SystemParams& p, double t, Branch b, double radius)
    : p_(p), t_(t), b_(b), alpha_rot_(p.alpha_hat * std::polar(1.0, -p.omega * t)) {
  const double reach = p.rho_hat * (radius + p.displacement);
  const int n_cap = std::max(mode_cutoff(p), static_cast<int>(std::ceil(reach + 12.0 * std::sqrt(reach) + 40.0)));
  extend(n_cap);
}

void HusimiSeries::extend(int n_max) {
  const auto lag = specfun::laguerre_sequence(n_max, 0, p_.x);
  cx_.resize(static_cast<std::size_t>(n_max) + 1);
  cy_.resize(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    BlockSpectrum bs;
    bs.n = n;
    bs.delta_n = -0.5 * p_.delta_tilde * lag[static_cast<std::size_t>(n)];
    bs.eps_tilde = p_.eps_tilde;
    bs.chi = std::hypot(bs.delta_n, p_.eps_tilde);
    cx_[n] = bs.c_coefficient(t_, b_);
    cy_[n] = static_cast<double>(bs.parity()) * std::conj(bs.c_coefficient(t_, opposite(b_)));
  }
}

cplx HusimiSeries::sum(const std::vector<cplx>& coef, cplx w) const {
  // running term: e^{-(rho^2 + |w|^2)/2} z^n / n!,  z = alpha_hat conj(w) e^{-i omega t}
  const cplx z = alpha_rot_ * std::conj(w);
  const double az = std::abs(z);
  const double zr = z.real(), zi = z.imag();
  // plain real arithmetic: complex * complex goes through the NaN-safe libcall otherwise
  double tr = std::exp(-0.5 * (p_.rho_hat * p_.rho_hat + std::norm(w))), ti = 0.0;
  double ar = tr * coef[0].real(), ai = tr * coef[0].imag();
  const int n_avail = static_cast<int>(coef.size()) - 1;
  for (int n = 1;; ++n) {
    if (n > n_avail)
      throw NumericalError("oscillator_phase_space::q_series", "Fourier sum needs more than " + std::to_string(n_avail) + " terms");
    const double inv = 1.0 / n;
    const double nr = (tr * zr - ti * zi) * inv;
    ti = (tr * zi + ti * zr) * inv;
    tr = nr;
    const cplx c = coef[static_cast<std::size_t>(n)];
    ar += tr * c.real() - ti * c.imag();
    ai += tr * c.imag() + ti * c.real();
    // |C_n| <= sqrt(2), so |term| bounds the remainder once past the peak at n ~ |z|
    if (n >= 10 && n > az && (std::abs(tr) + std::abs(ti)) * 2.0 < 1e-16 * (std::abs(ar) + std::abs(ai) + 1.0)) break;
  }
  const cplx acc(ar, ai);
  return acc;
}

double HusimiSeries::operator()(cplx beta) const {
  const cplx bh = beta + p_.displacement;
  const cplx bc = beta - p_.displacement;
  const cplx xs = sum(cx_, bh);
  const cplx ys = sum(cy_, bc);
  return (std::norm(xs) + std::norm(ys)) / (2.0 * std::numbers::pi);
}

double q_series(const SystemParams& p, double t, Branch b, cplx beta) {
  return HusimiSeries(p, t, b, std::abs(beta))(beta);
}

double q_linear(const SystemParams& p, double t, Branch b, cplx beta) {
  const double d = p.displacement, x = p.x, tau = p.delta_tilde * t, e = p.epsilon, dt = p.delta_tilde;
  const double s = sign_of(b);
  const cplx I(0.0, 1.0);
  const cplx rot = std::polar(1.0, -p.omega * t);
  const cplx ph = p.alpha_hat * std::conj(beta + d) * rot;
  const cplx ps = p.alpha_hat * std::conj(beta - d) * rot;
  const double c = std::cos(x * tau / 2.0), sn = std::sin(x * tau / 2.0);
  const cplx pp = ph * c, pr = ph * sn, sp = ps * c, sr = ps * sn;

  const cplx xs = std::exp(pp) * std::cos(pr - tau / 2.0) + s * I * std::exp(-pp) * std::sin(pr + tau / 2.0) -
                  I * e / dt * std::exp(pp) * (std::sin(pr - tau / 2.0) + x * ph * std::sin(pr - (1.0 - x) * tau / 2.0)) -
                  s * I * e * e / (2.0 * dt * dt) * std::exp(-pp) *
                      (std::sin(pr + tau / 2.0) - 2.0 * x * ph * std::sin(pr + (1.0 - x) * tau / 2.0));
  const cplx ys = std::exp(-sp) * std::cos(sr + tau / 2.0) - s * I * std::exp(sp) * std::sin(sr - tau / 2.0) -
                  I * e / dt * std::exp(-sp) * (std::sin(sr + tau / 2.0) - x * ps * std::sin(sr + (1.0 - x) * tau / 2.0)) +
                  s * I * e * e / (2.0 * dt * dt) * std::exp(sp) *
                      (std::sin(sr - tau / 2.0) + 2.0 * x * ps * std::sin(sr - (1.0 - x) * tau / 2.0));

  const double r2 = p.rho_hat * p.rho_hat;
  return (std::exp(-r2 - std::norm(beta + d)) * std::norm(xs) + std::exp(-r2 - std::norm(beta - d)) * std::norm(ys)) /
         (2.0 * std::numbers::pi);
}

}  // namespace qbell
