#pragma once

#include <complex>
#include <span>
#include <vector>

namespace morsewig {

using Complex = std::complex<double>;

/// Special-function kernel: log-gamma, binomials, associated Laguerre
/// polynomials and modified Bessel functions of the third kind with
/// complex order. Every function is pure and thread-safe.
namespace specfun {

/// Largest |Re nu| accepted by the Bessel routines.
inline constexpr double kMaxBesselOrder = 128.0;

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// ln(n!) for n >= 0.
double log_factorial(int n);

/// Binomial coefficient C(a, b) as a double. Integer-exact while the
/// value is below 2^53.
double binomial(int a, int b);

/// ln C(a, b).
double log_binomial(int a, int b);

/// Associated Laguerre polynomial L_n^k(x) by the three-term recurrence.
double laguerre(int n, double k, double x);

/// Monomial coefficients a_m of L_n^k(x) = sum_m a_m x^m, m = 0..n.
std::vector<double> laguerre_coeffs(int n, int k);

/// Exponentially scaled K: e^x K_nu(x) for complex order nu and x > 0.
///
/// Evaluated from K_nu(x) = 1/2 int exp(-x cosh t + nu t) dt over the real
/// line, with the contour lifted into the strip |Im t| < pi/2 so that it
/// passes through the saddle of the integrand. This keeps full relative
/// accuracy when |Im nu| >> x, where K is exponentially small and the
/// real-axis integrand cancels catastrophically. Throws AccuracyError if
/// adaptive Gauss-Kronrod refinement cannot reach rel_tol.
Complex bessel_k_scaled(Complex nu, double x, double rel_tol);

/// K_nu(x); underflows to zero for very large x.
Complex bessel_k(Complex nu, double x, double rel_tol);

/// [K_{i sigma}(x), K_{1 + i sigma}(x), ..., K_{j_max + i sigma}(x)].
/// Two quadrature seeds, then upward recurrence in the order.
std::vector<Complex> bessel_k_row(double sigma, double x, int j_max,
                                  double rel_tol);

/// Same as bessel_k_row, every entry multiplied by e^x.
std::vector<Complex> bessel_k_scaled_row(double sigma, double x, int j_max,
                                         double rel_tol);

/// Batch of scaled values e^{x - mu_j} K_{j + i sigma}(x), j = 0..j_max, at
/// one x and any |sigma| <= sigma_cap, from one shared set of real-axis
/// Gauss-Legendre nodes. mu_j is the log of the peak of the j-th integrand,
/// which keeps large orders at small x representable.
///
/// Accuracy is absolute on the scale of the real-order value K_j(x), not
/// relative: once |sigma| >> x the result is dominated by rounding of order
/// eps K_j(x). That is the accuracy a sum of many orders needs, and it is
/// what makes one table per x reusable across every sigma. Node density is
/// doubled until the next finer table agrees to tol on that scale; the
/// finer table of the pair is kept.
class BesselOrderTable {
 public:
  BesselOrderTable(double x, int j_max, double sigma_cap, double tol);

  double x() const { return x_; }
  int j_max() const { return j_max_; }
  double sigma_cap() const { return sigma_cap_; }
  double log_scale(int j) const { return mu_[static_cast<std::size_t>(j)]; }
  std::size_t nodes() const { return t_.size(); }

  /// out[j] = e^{x - mu_j} K_{j + i sigma}(x); out.size() must be j_max + 1.
  void eval(double sigma, std::span<Complex> out) const;

 private:
  void build(double width);

  double x_;
  int j_max_;
  double sigma_cap_;
  double t_max_ = 0.0;
  std::vector<double> mu_;
  std::vector<double> t_;
  std::vector<double> even_;  // [node][j] weight e^{E - mu_j} cosh(j t)
  std::vector<double> odd_;   // [node][j] weight e^{E - mu_j} sinh(j t)
};

}  // namespace specfun
}  // namespace morsewig
