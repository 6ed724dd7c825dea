#include "qbell/quadrature.hpp"

#include <algorithm>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>

#include "qbell/errors.hpp"
#include "qbell/oscillator_phase_space.hpp"

namespace qbell {

const char* to_string(QuadratureRule r) { return r == QuadratureRule::gauss_legendre ? "gauss-legendre" : "trapezoid"; }

Box default_box(const SystemParams& p) {
  const double h = p.rho_hat + p.displacement + 6.0;
  return {-h, h, -h, h};
}

Rule1D make_rule(QuadratureRule rule, int n, double a, double b) {
  if (n < 2) throw InvalidInput("oscillator_phase_space::make_rule", "need at least two nodes");
  if (!(b > a)) throw InvalidInput("oscillator_phase_space::make_rule", "empty interval");
  Rule1D r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  if (rule == QuadratureRule::trapezoid) {
    const double h = (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) {
      r.nodes[i] = a + i * h;
      r.weights[i] = (i == 0 || i == n - 1) ? 0.5 * h : h;
    }
    return r;
  }
  // boost returns the non-negative zeros in ascending order
  const auto zeros = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> xs, ws;
  for (double z : zeros) {
    const double dp = boost::math::legendre_p_prime(n, z);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    if (z == 0.0) {
      xs.push_back(0.0);
      ws.push_back(w);
    } else {
      xs.push_back(z);
      ws.push_back(w);
      xs.push_back(-z);
      ws.push_back(w);
    }
  }
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });
  for (std::size_t k = 0; k < order.size(); ++k) {
    r.nodes[k] = mid + half * xs[order[k]];
    r.weights[k] = half * ws[order[k]];
  }
  return r;
}

double QGrid::integrate(const std::function<double(cplx, double)>& g) const {
  double acc = 0.0;
  for (int i = 0; i < n_re(); ++i) {
    double col = 0.0;
    for (int j = 0; j < n_im(); ++j) col += im.weights[j] * g(cplx(re.nodes[i], im.nodes[j]), values(i, j));
    acc += re.weights[i] * col;
  }
  return acc;
}

double QGrid::total() const {
  double acc = 0.0;
  for (int i = 0; i < n_re(); ++i) {
    double col = 0.0;
    for (int j = 0; j < n_im(); ++j) col += im.weights[j] * values(i, j);
    acc += re.weights[i] * col;
  }
  return acc;
}

QGrid tabulate_grid(const SystemParams& p, double t, Branch b, const GridSpec& spec,
                    const std::function<double(cplx)>& q) {
  QGrid g;
  g.box = spec.box.value_or(default_box(p));
  g.rule = spec.rule;
  g.re = make_rule(spec.rule, spec.n_re, g.box.re_min, g.box.re_max);
  g.im = make_rule(spec.rule, spec.n_im, g.box.im_min, g.box.im_max);
  g.t = t;
  g.branch = b;
  g.params = p;
  g.values.resize(spec.n_re, spec.n_im);
  for (int i = 0; i < spec.n_re; ++i)
    for (int j = 0; j < spec.n_im; ++j) g.values(i, j) = q(cplx(g.re.nodes[i], g.im.nodes[j]));
  return g;
}

QGrid evaluate_grid(const SystemParams& p, double t, Branch b, const GridSpec& spec) {
  const Box box = spec.box.value_or(default_box(p));
  const double radius = std::hypot(std::max(std::abs(box.re_min), std::abs(box.re_max)),
                                   std::max(std::abs(box.im_min), std::abs(box.im_max)));
  const HusimiSeries q(p, t, b, radius);
  return tabulate_grid(p, t, b, spec, [&](cplx beta) { return q(beta); });
}

}  // namespace qbell
