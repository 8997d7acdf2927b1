#pragma once

// Evaluation engines behind the Wigner point and grid functions. Each
// kernel holds state-dependent precomputation; a Column holds the
// x-dependent part so that a lattice column reuses it across momenta.

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "morsewig/specfun.hpp"
#include "morsewig/wigner.hpp"

namespace morsewig::detail {

/// Residual check shared by both methods.
void check_real(Complex s, double x, double p, const char* method);

class ClosedKernel {
 public:
  ClosedKernel(const BoundState& state, const WignerConfig& cfg);

  struct Column {
    double x = 0.0;
    double xi = 0.0;
    std::map<double, specfun::BesselOrderTable> tables;
    // Per order offset: the xi-power sum times e^{mu_j - xi}; momentum free.
    std::vector<std::complex<long double>> poly;
  };

  Column column(double x) const;
  double eval(Column& col, double p) const;
  /// The double sum before its real part is taken.
  Complex sum(Column& col, double p) const;

 private:
  // Coefficients and the xi-power sum are kept in long double: the
  // alternating powers of xi cancel by up to ~1e6 for excited states.
  using Wide = long double;
  using WideComplex = std::complex<Wide>;

  struct Term {
    int e;
    WideComplex a;  // coefficient relative to exp(lambda_e)
  };

  void fill_poly(Column& col, const specfun::BesselOrderTable& table) const;

  int n_;
  double hbar_;
  double beta_;
  double tol_;
  BesselScaling scaling_;
  std::vector<Wide> lambda_;             // per power e = 0..2N
  std::vector<std::vector<Term>> terms_;  // per order offset j + N - 1
};

class QuadKernel {
 public:
  QuadKernel(const BoundState& state, const WignerConfig& cfg);

  struct Column {
    double x = 0.0;
    double half_window = 0.0;  // Y
    std::size_t nodes = 0;     // M; samples at y_i = -Y + 2Y i / M
    std::vector<Complex> product;
  };

  Column column(double x) const;
  double eval(Column& col, double p) const;

  /// Interval outside which sum |c_n psi_n| < 1e-14.
  double support_lo() const { return x_lo_; }
  double support_hi() const { return x_hi_; }

 private:
  void fill(Column& col, std::size_t nodes) const;

  const BoundState* state_;
  double hbar_;
  int quad_points_;
  std::optional<double> window_;
  double x_lo_ = 0.0;
  double x_hi_ = 0.0;
};

/// Support [lo, hi] of the envelope sum |c_n psi_n(x)| at level `level`.
std::pair<double, double> envelope_support(const BoundState& state,
                                           double level);

}  // namespace morsewig::detail
