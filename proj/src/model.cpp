#include "qbell/model.hpp"

#include <cmath>

#include "qbell/errors.hpp"
#include "qbell/specfun.hpp"

namespace qbell {

const char* to_string(Branch b) { return b == Branch::plus ? "+" : "-"; }

SystemParams derive(const PhysicalInputs& in) {
  const char* where = "model::derive";
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(in.delta) || !finite(in.epsilon) || !finite(in.omega) || !finite(in.lambda) ||
      !finite(in.alpha.real()) || !finite(in.alpha.imag()))
    throw InvalidInput(where, "parameters must be finite");
  if (in.omega <= 0.0) throw InvalidInput(where, "omega must be positive");
  if (in.delta <= 0.0) throw InvalidInput(where, "delta must be positive");
  if (in.lambda < 0.0) throw InvalidInput(where, "lambda must be non-negative");
  if (in.epsilon < 0.0) throw InvalidInput(where, "epsilon must be non-negative");

  SystemParams p;
  p.delta = in.delta;
  p.epsilon = in.epsilon;
  p.omega = in.omega;
  p.lambda = in.lambda;
  p.alpha = in.alpha;

  p.displacement = in.lambda / in.omega;
  p.x = 4.0 * p.displacement * p.displacement;
  p.alpha_hat = in.alpha + p.displacement;
  p.rho_hat = std::abs(p.alpha_hat);
  p.delta_tilde = in.delta * std::exp(-0.5 * p.x);
  p.eps_tilde = 0.5 * in.epsilon;

  p.regime.adiabatic = in.delta < in.omega;
  p.regime.strong = p.displacement <= 0.2;
  p.regime.linear_laguerre = p.displacement <= 0.1;
  p.regime.ultra_strong = p.displacement >= 0.5;

  if (!p.regime.adiabatic) p.warnings.emplace_back("delta >= omega: adiabatic basis is not a good approximation");
  if (p.epsilon > 0.0 && p.epsilon / p.delta_tilde > 0.5)
    p.warnings.emplace_back("epsilon is not small compared to the renormalized tunneling");
  return p;
}

std::array<double, 2> BlockSpectrum::eigenvector(Branch b) const {
  const double s = sign_of(b);
  if (chi == 0.0) return {std::sqrt(0.5), s * std::sqrt(0.5)};
  const double r = eps_tilde / chi;
  return {std::sqrt(0.5 * (1.0 - s * r)), s * sign_delta() * std::sqrt(0.5 * (1.0 + s * r))};
}

double BlockSpectrum::coeff_a(Branch b) const {
  if (chi == 0.0) return 0.5;
  return (chi + eps_tilde + sign_of(b) * parity() * delta_n) / (2.0 * chi);
}

double BlockSpectrum::coeff_b(Branch b) const {
  if (chi == 0.0) return 0.5;
  return (chi - eps_tilde + sign_of(b) * parity() * delta_n) / (2.0 * chi);
}

cplx BlockSpectrum::c_coefficient(double t, Branch b) const {
  const double ph = chi * t;
  const cplx e = std::polar(1.0, ph);
  return coeff_a(opposite(b)) * e + coeff_b(b) * std::conj(e);
}

double BlockSpectrum::sin2_over_chi2(double t) const {
  const double ph = chi * t;
  if (std::abs(ph) < 1e-8) return t * t;
  const double s = std::sin(ph) / chi;
  return s * s;
}

BlockSpectrum block_spectrum(const SystemParams& p, int n) {
  BlockSpectrum bs;
  bs.n = n;
  bs.delta_n = -0.5 * p.delta_tilde * specfun::laguerre(n, 0, p.x);
  bs.eps_tilde = p.eps_tilde;
  bs.chi = std::hypot(bs.delta_n, p.eps_tilde);
  bs.e_bar = n * p.omega - p.lambda * p.lambda / p.omega;
  return bs;
}

int mode_cutoff(const SystemParams& p, double tail) {
  const double r2 = p.rho_hat * p.rho_hat;
  const int floor_n = static_cast<int>(std::ceil(r2 + 10.0 * p.rho_hat + 20.0));
  return std::max(floor_n, specfun::poisson_cutoff(r2, tail));
}

ModeSet::ModeSet(const SystemParams& p, int n_max) : p_(p) {
  if (n_max < 0) throw InvalidInput("model::ModeSet", "negative cutoff");
  blocks_.reserve(static_cast<std::size_t>(n_max) + 1);
  weights_.reserve(static_cast<std::size_t>(n_max) + 1);
  const auto lag = specfun::laguerre_sequence(n_max, 0, p.x);
  const double r2 = p.rho_hat * p.rho_hat;
  for (int n = 0; n <= n_max; ++n) {
    BlockSpectrum bs;
    bs.n = n;
    bs.delta_n = -0.5 * p.delta_tilde * lag[static_cast<std::size_t>(n)];
    bs.eps_tilde = p.eps_tilde;
    bs.chi = std::hypot(bs.delta_n, p.eps_tilde);
    bs.e_bar = n * p.omega - p.lambda * p.lambda / p.omega;
    blocks_.push_back(bs);
    weights_.push_back(specfun::poisson_weight(n, r2));
  }
}

std::vector<cplx> ModeSet::coefficients(double t, Branch b) const {
  std::vector<cplx> out;
  out.reserve(blocks_.size());
  for (const auto& bs : blocks_) out.push_back(bs.c_coefficient(t, b));
  return out;
}

void ModeSet::amplitudes(double t, Branch b, std::vector<cplx>& a, std::vector<cplx>& bm) const {
  const std::size_t dim = blocks_.size();
  a.assign(dim, 0.0);
  bm.assign(dim, 0.0);
  const double r2 = p_.rho_hat * p_.rho_hat;
  const double arg = std::arg(p_.alpha_hat);
  const double s = sign_of(b);
  for (std::size_t n = 0; n < dim; ++n) {
    const auto& bs = blocks_[n];
    // |p_n| = sqrt(Poisson weight / 2)
    const double mag = (r2 == 0.0) ? (n == 0 ? std::sqrt(0.5) : 0.0)
                                   : std::exp(0.5 * (specfun::log_poisson_weight(static_cast<int>(n), r2) - std::log(2.0)));
    const cplx pn = std::polar(mag, static_cast<double>(n) * arg - bs.e_bar * t);
    a[n] = pn * bs.c_coefficient(t, b);
    bm[n] = s * bs.parity() * pn * std::conj(bs.c_coefficient(t, opposite(b)));
  }
}

}  // namespace qbell
