#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qbell/model.hpp"
#include "qbell/quadrature.hpp"

namespace qbell {

struct DelocalizationRecord {
  double t = 0.0;
  double lambda = 0.0;
  Branch branch = Branch::plus;
  double s_wehrl = 0.0;
  double m2 = 0.0;
  double w2 = 0.0;  // 1 / m2
  double uncertainty = 0.0;
  std::optional<double> smoothed;
};

// -integral Q log Q over the grid; Q <= 0 contributes nothing.  Throws
// NumericalError when the grid total misses 1 by more than 10 tol_norm.
double wehrl_entropy(const QGrid& grid, double tol_norm = 1e-4);

// integral Q^2 over the grid.
double second_moment_quadrature(const QGrid& grid);

// Coefficient of y^{N-n} in (1 - y)^mu (1 + y)^{N - mu}, for n = 0..N.
std::vector<double> lambda_row(int big_n, int mu);

// Integral of Q^2 from the mode sums.  n_cut = 0 picks the cutoff from the
// Poisson tail of the doubled photon number.
double complexity_m2_series(const SystemParams& p, double t, Branch b, int n_cut = 0);

// Savitzky-Golay smoothing.  The window (odd) shrinks at the ends, where the
// polynomial order is capped by the available points.
std::vector<double> smooth(std::span<const double> series, int window, int order);

// Centered moving average; the window shrinks at the ends.
std::vector<double> boxcar(std::span<const double> series, int window);

// W(lambda) = exp(S(lambda) - S(lambda_0)).
std::vector<double> weight_ratio(std::span<const double> s_lambda, std::size_t i0);

struct SlopeFit {
  double lambda_0 = 0.0;
  std::size_t index_0 = 0;
  double m_less = 0.0;     // least-squares slope on [lambda_min, lambda_0]
  double m_greater = 0.0;  // least-squares slope on [lambda_0, lambda_max]
  double lambda_min = 0.0, lambda_max = 0.0;
};

// lambda_0 is the argmax of the (already smoothed) curve; throws NumericalError
// if it sits on the boundary.
SlopeFit fit_slopes(std::span<const double> lambdas, std::span<const double> s_smoothed);

}  // namespace qbell
