#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qbell/errors.hpp"
#include "qbell/oscillator_phase_space.hpp"

using namespace qbell;

namespace {
SystemParams params(double delta, double eps, double lambda, double alpha) {
  PhysicalInputs in;
  in.delta = delta;
  in.epsilon = eps;
  in.lambda = lambda;
  in.alpha = alpha;
  return derive(in);
}

// <op> from a Fock-basis density matrix
struct FockMoments {
  double e1, b1, e2, b2;
};
FockMoments fock_moments(const Eigen::MatrixXcd& rho) {
  const int dim = static_cast<int>(rho.rows());
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXcd ad = a.adjoint();
  const Eigen::MatrixXcd e = (a - ad) / cplx(0.0, std::numbers::sqrt2);
  const Eigen::MatrixXcd b = (a + ad) / std::numbers::sqrt2;
  auto tr = [&](const Eigen::MatrixXcd& op) { return (rho * op).trace().real(); };
  return {tr(e), tr(b), tr(e * e), tr(b * b)};
}
}  // namespace

TEST_CASE("oscillator density matrix") {
  const auto p = params(0.15, 0.05, 0.3, 1.5);
  const auto rho = oscillator_density(p, 77.0, Branch::plus);
  CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK((rho - rho.adjoint()).norm() < 1e-14);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  const auto ev = es.eigenvalues();
  CHECK(ev.minCoeff() > -1e-12);
  int significant = 0;
  for (int i = 0; i < ev.size(); ++i) significant += ev(i) > 1e-12;
  CHECK(significant <= 2);
}

TEST_CASE("uncoupled limit at t = 0 is an even mixture of two coherent states") {
  const auto p = params(0.15, 0.0, 0.0, 1.3);
  const auto rho = oscillator_density(p, 0.0, Branch::plus);
  for (cplx beta : {cplx(1.3, 0.0), cplx(-1.0, 0.5), cplx(0.2, -0.7)}) {
    const double ref = (std::exp(-std::norm(beta - 1.3)) + std::exp(-std::norm(beta + 1.3))) / (2.0 * std::numbers::pi);
    CHECK(oracle::husimi_from_density(rho, beta) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(q_series(p, 0.0, Branch::plus, beta) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("Fourier-sum Q equals <beta|rho_O|beta> / pi") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  struct Case {
    double delta, eps, lambda, alpha, t;
  };
  for (const Case c : {Case{0.15, 0.01, 0.08, 2.0, 500.0}, Case{0.15, 0.03, 0.9, 1.0, 41.0},
                       Case{0.15, 0.1, 0.4, 1.5, 900.0}}) {
    const auto p = params(c.delta, c.eps, c.lambda, c.alpha);
    for (Branch b : {Branch::plus, Branch::minus}) {
      const auto rho = oscillator_density(p, c.t, b);
      const HusimiSeries q(p, c.t, b, 6.0);
      for (int k = 0; k < 20; ++k) {
        const cplx beta(u(rng), u(rng));
        const double ref = oracle::husimi_from_density(rho, beta);
        CHECK(q(beta) == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
        CHECK(q(beta) >= 0.0);
        CHECK(q(beta) <= 1.0 / std::numbers::pi + 1e-12);
      }
    }
  }
}

TEST_CASE("Q vanishes far away without overflow") {
  const auto p = params(0.15, 0.03, 0.9, 3.0);
  CHECK(q_series(p, 10.0, Branch::plus, cplx(60.0, -40.0)) == doctest::Approx(0.0).scale(1.0));
  CHECK(std::isfinite(q_series(p, 10.0, Branch::plus, cplx(200.0, 0.0))));
}

TEST_CASE("linear-Laguerre Q") {
  const auto p = params(0.15, 0.01, 0.08, 2.0);
  for (Branch b : {Branch::plus, Branch::minus}) {
    for (cplx beta : {cplx(2.0, 0.0), cplx(-2.1, 0.3), cplx(0.0, 1.0)}) {
      // at t = 0 every C_n is one and both forms reduce to the same exponentials
      CHECK(q_linear(p, 0.0, b, beta) == doctest::Approx(q_series(p, 0.0, b, beta)).epsilon(1e-12));
    }
  }
  // without bias and with a tiny coupling the linearization is nearly exact
  const auto q = params(0.15, 0.0, 0.02, 2.0);
  for (cplx beta : {cplx(1.5, 1.0), cplx(-2.0, -0.5)}) {
    CHECK(q_linear(q, 300.0, Branch::plus, beta) ==
          doctest::Approx(q_series(q, 300.0, Branch::plus, beta)).epsilon(1e-3).scale(1.0));
  }
}

TEST_CASE("quadrature rules") {
  const auto gl = make_rule(QuadratureRule::gauss_legendre, 7, -1.0, 3.0);
  double s0 = 0.0, s6 = 0.0, sw = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    s0 += gl.weights[i];
    s6 += gl.weights[i] * std::pow(gl.nodes[i], 13);
  }
  CHECK(s0 == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(s6 == doctest::Approx((std::pow(3.0, 14) - 1.0) / 14.0).epsilon(1e-13));
  CHECK(std::is_sorted(gl.nodes.begin(), gl.nodes.end()));
  const auto tr = make_rule(QuadratureRule::trapezoid, 11, 0.0, 1.0);
  for (double w : tr.weights) sw += w;
  CHECK(sw == doctest::Approx(1.0));
  CHECK(tr.nodes.front() == 0.0);
  CHECK(tr.nodes.back() == 1.0);
  CHECK_THROWS_AS(make_rule(QuadratureRule::trapezoid, 1, 0.0, 1.0), InvalidInput);
}

TEST_CASE("grid normalization and moments") {
  const auto p = params(0.15, 0.01, 0.16, 1.0);
  for (double t : {0.0, 355.0}) {
    for (Branch b : {Branch::plus, Branch::minus}) {
      const auto grid = evaluate_grid(p, t, b, GridSpec{121, 121, QuadratureRule::gauss_legendre, std::nullopt});
      CHECK(grid.total() == doctest::Approx(1.0).epsilon(1e-9));
      const auto mq = moments_quadrature(grid);
      const auto ms = moments_series(p, t, b);
      const auto mf = fock_moments(oscillator_density(p, t, b));
      CHECK(ms.e1 == doctest::Approx(mq.e1).scale(1.0).epsilon(1e-8));
      CHECK(ms.b1 == doctest::Approx(mq.b1).scale(1.0).epsilon(1e-8));
      CHECK(ms.e2 == doctest::Approx(mq.e2).scale(1.0).epsilon(1e-8));
      CHECK(ms.b2 == doctest::Approx(mq.b2).scale(1.0).epsilon(1e-8));
      CHECK(ms.e1 == doctest::Approx(mf.e1).scale(1.0).epsilon(1e-9));
      CHECK(ms.b1 == doctest::Approx(mf.b1).scale(1.0).epsilon(1e-9));
      CHECK(ms.e2 == doctest::Approx(mf.e2).scale(1.0).epsilon(1e-9));
      CHECK(ms.b2 == doctest::Approx(mf.b2).scale(1.0).epsilon(1e-9));
      CHECK(ms.uncertainty >= 0.5 - 1e-9);
    }
  }
}

TEST_CASE("first moments vanish without bias") {
  const auto p = params(0.15, 0.0, 0.16, 1.0);
  for (double t : {0.0, 120.0, 800.0}) {
    const auto ms = moments_series(p, t, Branch::plus);
    CHECK(std::abs(ms.e1) < 1e-13);
    CHECK(std::abs(ms.b1) < 1e-13);
    const auto mt = moments_theta(p, t, Branch::plus);
    CHECK(mt.e1 == 0.0);
    CHECK(mt.b1 == 0.0);
  }
}

TEST_CASE("theta moments near t = 0") {
  const auto p = params(0.15, 0.01, 0.16, 1.0);
  const auto ms = moments_series(p, 0.0, Branch::plus);
  const auto mt = moments_theta(p, 0.0, Branch::plus);
  CHECK(mt.e2 == doctest::Approx(ms.e2).epsilon(0.02));
  CHECK(mt.b2 == doctest::Approx(ms.b2).epsilon(0.02));
}

TEST_CASE("uncertainty product") {
  CHECK(uncertainty_product(0.0, 0.0, 0.5, 0.5) == doctest::Approx(0.5));
  CHECK(uncertainty_product(1.0, 0.0, 1.5, 2.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(uncertainty_product(2.0, 0.0, 1.0, 1.0), NumericalError);
}

TEST_CASE("density truncation guard") {
  const auto p = params(0.15, 0.03, 0.9, 3.0);
  CHECK_THROWS_AS(oscillator_density(p, 10.0, Branch::plus, 20, 2), NumericalError);
  CHECK_NOTHROW(oscillator_density(p, 10.0, Branch::plus));
}
