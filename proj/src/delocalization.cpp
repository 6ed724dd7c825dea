#include "qbell/delocalization.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

#include "qbell/errors.hpp"
#include "qbell/specfun.hpp"

namespace qbell {

double wehrl_entropy(const QGrid& grid, double tol_norm) {
  const double total = grid.total();
  if (std::abs(total - 1.0) > 10.0 * tol_norm)
    throw NumericalError("delocalization::wehrl_entropy", "grid normalization defect " + std::to_string(total - 1.0));
  return grid.integrate([](cplx, double q) { return q > 0.0 ? -q * std::log(q) : 0.0; });
}

double second_moment_quadrature(const QGrid& grid) {
  return grid.integrate([](cplx, double q) { return q * q; });
}

namespace {

using i128 = __int128;

// Exact binomial rows while they fit in 128 bits; beyond that, arbitrary precision.
constexpr int kExactRows = 124;

const std::vector<std::vector<i128>>& exact_binomials() {
  static const auto rows = [] {
    std::vector<std::vector<i128>> r(kExactRows + 1);
    for (int n = 0; n <= kExactRows; ++n) {
      r[n].assign(static_cast<std::size_t>(n) + 1, 1);
      for (int k = 1; k < n; ++k) r[n][k] = r[n - 1][k - 1] + r[n - 1][k];
    }
    return r;
  }();
  return rows;
}

boost::multiprecision::cpp_int binom_big(int n, int k) {
  boost::multiprecision::cpp_int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::vector<double> lambda_row(int big_n, int mu) {
  if (big_n < 0 || mu < 0 || mu > big_n) throw InvalidInput("delocalization::lambda_row", "need 0 <= mu <= N");
  std::vector<double> out(static_cast<std::size_t>(big_n) + 1);
  for (int n = 0; n <= big_n; ++n) {
    const int k_lo = std::max(0, mu - n);
    const int k_hi = std::min(mu, big_n - n);
    if (big_n <= kExactRows) {
      const auto& c = exact_binomials();
      i128 acc = 0;
      for (int k = k_lo; k <= k_hi; ++k) {
        const i128 term = c[mu][k] * c[big_n - mu][big_n - n - k];
        acc += (k % 2 == 0) ? term : -term;
      }
      out[n] = static_cast<double>(acc);
    } else {
      boost::multiprecision::cpp_int acc = 0;
      for (int k = k_lo; k <= k_hi; ++k) {
        const auto term = binom_big(mu, k) * binom_big(big_n - mu, big_n - n - k);
        if (k % 2 == 0) acc += term;
        else acc -= term;
      }
      out[n] = acc.convert_to<double>();
    }
  }
  return out;
}

namespace {

// Lambda_{N,n,mu} rows for N up to some bound, grown on demand.  Readers keep
// a shared snapshot so growth never touches a table in use.
class LambdaCache {
 public:
  using Table = std::vector<std::vector<double>>;

  std::shared_ptr<const Table> ensure(int n_max) {
    std::lock_guard<std::mutex> lock(mu_);
    if (n_max > built_) {
      auto next = std::make_shared<Table>(table_ ? *table_ : Table{});
      for (int big_n = built_ + 1; big_n <= n_max; ++big_n)
        for (int m = 0; m <= big_n; ++m) next->push_back(lambda_row(big_n, m));
      table_ = std::move(next);
      built_ = n_max;
    }
    return table_;
  }

  static std::size_t index(int big_n, int mu) {
    return static_cast<std::size_t>(big_n) * (big_n + 1) / 2 + static_cast<std::size_t>(mu);
  }

  static LambdaCache& instance() {
    static LambdaCache c;
    return c;
  }

 private:
  std::mutex mu_;
  int built_ = -1;
  std::shared_ptr<const Table> table_;
};

}  // namespace

double complexity_m2_series(const SystemParams& p, double t, Branch b, int n_cut) {
  const double r2 = p.rho_hat * p.rho_hat;
  const double d = p.displacement;
  if (n_cut <= 0) {
    const double reach = p.rho_hat + d;
    n_cut = specfun::poisson_cutoff(2.0 * reach * reach, 1e-16) + 10;
  }
  const auto table = LambdaCache::instance().ensure(n_cut);

  const ModeSet modes(p, n_cut);
  const auto cs = modes.coefficients(t, b);
  const auto co = modes.coefficients(t, opposite(b));

  // Diagonal blocks: Poisson(2 rho^2) weights times |sum_n C(N,n)/2^N C_n C_{N-n}|^2.
  double diag = 0.0, diag_tail = 0.0;
  for (int big_n = 0; big_n <= n_cut; ++big_n) {
    cplx sp = 0.0, sm = 0.0;
    for (int n = 0; n <= big_n; ++n) {
      const double bw = std::exp(specfun::log_factorial(big_n) - specfun::log_factorial(n) -
                                 specfun::log_factorial(big_n - n) - big_n * std::numbers::ln2);
      sp += bw * cs[n] * cs[big_n - n];
      sm += bw * co[n] * co[big_n - n];
    }
    const double term = specfun::poisson_weight(big_n, 2.0 * r2) * (std::norm(sp) + std::norm(sm));
    diag += term;
    if (big_n > n_cut - 3) diag_tail += term;
  }

  // Cross block: sum_mu |g_mu|^2 with the Gaussian and 1/sqrt(2^mu mu!) folded into g.
  if (!(p.rho_hat > 0.0)) throw InvalidInput("delocalization::complexity_m2_series", "needs |alpha_hat| > 0");
  const double log_rho = std::log(p.rho_hat);
  const double arg = std::arg(p.alpha_hat) - p.omega * t;
  double cross = 0.0, cross_tail = 0.0;
  for (int mu = 0; mu <= n_cut; ++mu) {
    cplx g = 0.0;
    double last = 0.0;
    for (int big_n = mu; big_n <= n_cut; ++big_n) {
      if (d == 0.0 && big_n > mu) break;
      const auto& lam = (*table)[LambdaCache::index(big_n, mu)];
      cplx f = 0.0;
      for (int n = 0; n <= big_n; ++n) {
        if (lam[n] != 0.0) f += lam[n] * cs[n] * std::conj(co[big_n - n]);
      }
      const double log_mag = big_n * log_rho + (big_n > mu ? (big_n - mu) * std::log(d) : 0.0) -
                             specfun::log_factorial(big_n - mu) - r2 - d * d -
                             0.5 * (mu * std::numbers::ln2 + specfun::log_factorial(mu));
      const cplx term = std::polar(std::exp(log_mag), big_n * arg) * f;
      g += term;
      if (big_n > n_cut - 3) last += std::abs(term);
    }
    cross += std::norm(g);
    cross_tail += 2.0 * std::abs(g) * last + (mu > n_cut - 3 ? std::norm(g) : 0.0);
  }

  const double m2 = diag / (8.0 * std::numbers::pi) + cross / (4.0 * std::numbers::pi);
  const double tail = diag_tail / (8.0 * std::numbers::pi) + cross_tail / (4.0 * std::numbers::pi);
  if (tail > 1e-10)
    throw NumericalError("delocalization::complexity_m2_series", "tail estimate " + std::to_string(tail) + " at cutoff " +
                                                                   std::to_string(n_cut));
  return m2;
}

std::vector<double> smooth(std::span<const double> series, int window, int order) {
  const int n = static_cast<int>(series.size());
  if (window < 1 || window % 2 == 0) throw InvalidInput("delocalization::smooth", "window must be odd and positive");
  if (order < 0 || order >= window) throw InvalidInput("delocalization::smooth", "order must be below the window");
  if (window > n) throw InvalidInput("delocalization::smooth", "window longer than series");
  const int half = window / 2;

  // Row of the least-squares projector that evaluates the fit at offset `at`.
  auto weights = [](int lo, int hi, int at, int deg) {
    const int m = hi - lo + 1;
    deg = std::min(deg, m - 1);
    Eigen::MatrixXd v(m, deg + 1);
    for (int i = 0; i < m; ++i) {
      const double u = static_cast<double>(lo + i - at);
      double pw = 1.0;
      for (int k = 0; k <= deg; ++k) {
        v(i, k) = pw;
        pw *= u;
      }
    }
    // value at u = 0 is the constant coefficient: e_0^T (V^T V)^{-1} V^T
    const Eigen::MatrixXd pinv = v.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(m, m));
    return Eigen::VectorXd(pinv.row(0).transpose());
  };

  std::vector<double> out(static_cast<std::size_t>(n));
  const Eigen::VectorXd interior = weights(-half, half, 0, order);
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half), hi = std::min(n - 1, i + half);
    double acc = 0.0;
    if (hi - lo + 1 == window) {
      for (int k = 0; k < window; ++k) acc += interior(k) * series[lo + k];
    } else {
      const Eigen::VectorXd w = weights(lo, hi, i, order);
      for (int k = 0; k <= hi - lo; ++k) acc += w(k) * series[lo + k];
    }
    out[i] = acc;
  }
  return out;
}

std::vector<double> boxcar(std::span<const double> series, int window) {
  const int n = static_cast<int>(series.size());
  if (window < 1) throw InvalidInput("delocalization::boxcar", "window must be positive");
  std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + series[i];
  const int left = (window - 1) / 2, right = window / 2;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - left), hi = std::min(n - 1, i + right);
    out[i] = (prefix[hi + 1] - prefix[lo]) / (hi - lo + 1);
  }
  return out;
}

std::vector<double> weight_ratio(std::span<const double> s_lambda, std::size_t i0) {
  if (i0 >= s_lambda.size()) throw InvalidInput("delocalization::weight_ratio", "reference index out of range");
  std::vector<double> out;
  out.reserve(s_lambda.size());
  for (double s : s_lambda) out.push_back(std::exp(s - s_lambda[i0]));
  return out;
}

namespace {

double ls_slope(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

SlopeFit fit_slopes(std::span<const double> lambdas, std::span<const double> s_smoothed) {
  if (lambdas.size() != s_smoothed.size() || lambdas.size() < 3)
    throw InvalidInput("delocalization::fit_slopes", "need at least three matching samples");
  if (!std::is_sorted(lambdas.begin(), lambdas.end()))
    throw InvalidInput("delocalization::fit_slopes", "lambda samples must be sorted");
  const auto it = std::max_element(s_smoothed.begin(), s_smoothed.end());
  const std::size_t i0 = static_cast<std::size_t>(it - s_smoothed.begin());
  if (i0 == 0 || i0 + 1 == lambdas.size())
    throw NumericalError("delocalization::fit_slopes", "entropy peak sits on the scan boundary");
  SlopeFit fit;
  fit.index_0 = i0;
  fit.lambda_0 = lambdas[i0];
  fit.lambda_min = lambdas.front();
  fit.lambda_max = lambdas.back();
  fit.m_less = std::abs(ls_slope(lambdas.subspan(0, i0 + 1), s_smoothed.subspan(0, i0 + 1)));
  fit.m_greater = std::abs(ls_slope(lambdas.subspan(i0), s_smoothed.subspan(i0)));
  return fit;
}

}  // namespace qbell
