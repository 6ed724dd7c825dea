#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace qbell {

using cplx = std::complex<double>;

enum class Branch { plus, minus };

constexpr int sign_of(Branch b) { return b == Branch::plus ? 1 : -1; }
constexpr Branch opposite(Branch b) { return b == Branch::plus ? Branch::minus : Branch::plus; }
const char* to_string(Branch b);

struct PhysicalInputs {
  double delta = 0.15;
  double epsilon = 0.0;
  double omega = 1.0;
  double lambda = 0.0;
  cplx alpha = 0.0;
};

struct RegimeFlags {
  bool adiabatic = false;        // delta < omega
  bool strong = false;           // lambda <= 0.2 omega
  bool linear_laguerre = false;  // lambda <= 0.1 omega
  bool ultra_strong = false;     // lambda >= 0.5 omega
};

struct SystemParams {
  double delta = 0.0;
  double epsilon = 0.0;
  double omega = 1.0;
  double lambda = 0.0;
  cplx alpha = 0.0;

  double x = 0.0;             // (2 lambda / omega)^2
  double displacement = 0.0;  // lambda / omega
  cplx alpha_hat = 0.0;       // alpha + lambda / omega
  double rho_hat = 0.0;       // |alpha_hat|
  double delta_tilde = 0.0;   // delta e^{-x/2}
  double eps_tilde = 0.0;     // epsilon / 2

  RegimeFlags regime;
  std::vector<std::string> warnings;
};

// Validates the inputs and computes the derived quantities.  Throws InvalidInput.
SystemParams derive(const PhysicalInputs& in);

// One 2x2 block of the Hamiltonian in the adiabatic displaced basis
// {|1, n+>, |-1, n->}.
struct BlockSpectrum {
  int n = 0;
  double delta_n = 0.0;  // -(delta_tilde / 2) L_n(x)
  double chi = 0.0;      // sqrt(delta_n^2 + eps_tilde^2)
  double e_bar = 0.0;    // n omega - lambda^2 / omega
  double eps_tilde = 0.0;

  double energy(Branch b) const { return e_bar + sign_of(b) * chi; }
  int sign_delta() const { return delta_n < 0.0 ? -1 : 1; }
  int parity() const { return (n % 2 == 0) ? 1 : -1; }

  // Components of the eigenvector for energy(b) on (|1, n+>, |-1, n->).
  std::array<double, 2> eigenvector(Branch b) const;

  // Coefficients of e^{i chi t} and e^{-i chi t} in C_n^{+-}(t).
  double coeff_a(Branch b) const;
  double coeff_b(Branch b) const;

  // C_n^b(t) = A_n^{-b} e^{i chi t} + B_n^{b} e^{-i chi t}.
  cplx c_coefficient(double t, Branch b) const;

  // sin^2(chi t) / chi^2, with the t^2 limit near chi t = 0.
  double sin2_over_chi2(double t) const;
};

BlockSpectrum block_spectrum(const SystemParams& p, int n);

// Mode cutoff n_max covering the Poisson(|alpha_hat|^2) weight to 1 - tail.
int mode_cutoff(const SystemParams& p, double tail = 1e-14);

// Precomputed blocks and Poisson weights for 0..n_max.
class ModeSet {
 public:
  explicit ModeSet(const SystemParams& p) : ModeSet(p, mode_cutoff(p)) {}
  ModeSet(const SystemParams& p, int n_max);

  const SystemParams& params() const { return p_; }
  int n_max() const { return static_cast<int>(blocks_.size()) - 1; }
  const BlockSpectrum& block(int n) const { return blocks_[static_cast<std::size_t>(n)]; }
  double weight(int n) const { return weights_[static_cast<std::size_t>(n)]; }

  // C_n^b(t) for n = 0..n_max.
  std::vector<cplx> coefficients(double t, Branch b) const;

  // Amplitudes a_n, b_n of |psi(t)> on |1, n+> and |-1, n->.
  void amplitudes(double t, Branch b, std::vector<cplx>& a, std::vector<cplx>& bm) const;

 private:
  SystemParams p_;
  std::vector<BlockSpectrum> blocks_;
  std::vector<double> weights_;
};

}  // namespace qbell
