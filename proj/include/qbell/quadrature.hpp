#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qbell/model.hpp"

namespace qbell {

enum class QuadratureRule { gauss_legendre, trapezoid };
const char* to_string(QuadratureRule r);

struct Box {
  double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;
};

struct GridSpec {
  int n_re = 301;
  int n_im = 301;
  QuadratureRule rule = QuadratureRule::gauss_legendre;
  std::optional<Box> box;  // defaults to default_box(params)

  static GridSpec fine() { return {601, 601, QuadratureRule::gauss_legendre, std::nullopt}; }
};

// Square box centred at the origin with half-width |alpha_hat| + lambda/omega + 6;
// it contains both lobes at -+lambda/omega and the orbit of alpha_hat.
Box default_box(const SystemParams& p);

// Nodes and weights of an n-point rule on [a, b].
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Rule1D make_rule(QuadratureRule rule, int n, double a, double b);

// Q sampled on a tensor-product grid.  values(i, j) is at re_nodes[i], im_nodes[j].
struct QGrid {
  Box box;
  QuadratureRule rule = QuadratureRule::gauss_legendre;
  Rule1D re, im;
  Eigen::MatrixXd values;
  double t = 0.0;
  Branch branch = Branch::plus;
  SystemParams params;

  int n_re() const { return static_cast<int>(re.nodes.size()); }
  int n_im() const { return static_cast<int>(im.nodes.size()); }

  // sum_ij w_i w_j g(beta_ij, Q_ij)
  double integrate(const std::function<double(cplx, double)>& g) const;
  double total() const;
};

// Evaluates q_series on the grid.
QGrid evaluate_grid(const SystemParams& p, double t, Branch b, const GridSpec& spec);

// Same layout, arbitrary density.
QGrid tabulate_grid(const SystemParams& p, double t, Branch b, const GridSpec& spec,
                    const std::function<double(cplx)>& q);

}  // namespace qbell
