#pragma once

#include <vector>

namespace morsewig {

/// Physical and spectral parameters of a Morse oscillator with N bound
/// states. Only n_bound and the action/frequency/mass units are free; the
/// anharmonicity, range and depth follow from them:
///   chi = 1 / (2N + 1),  beta = sqrt(2 mass omega chi / hbar),
///   depth = hbar omega / (4 chi).
class MorseSystem {
 public:
  /// Throws DomainError unless n_bound >= 2 and the constants are
  /// positive and finite.
  static MorseSystem make(int n_bound, double hbar = 1.0, double omega = 1.0,
                          double mass = 1.0);

  int n_bound() const { return n_bound_; }
  double hbar() const { return hbar_; }
  double omega() const { return omega_; }
  double mass() const { return mass_; }
  double chi() const { return chi_; }
  double beta() const { return beta_; }
  double depth() const { return depth_; }

  bool operator==(const MorseSystem&) const = default;

 private:
  MorseSystem(int n_bound, double hbar, double omega, double mass);

  int n_bound_;
  double hbar_;
  double omega_;
  double mass_;
  double chi_;
  double beta_;
  double depth_;
};

MorseSystem make_system(int n_bound, double hbar = 1.0, double omega = 1.0,
                        double mass = 1.0);

/// V(x) = D[(1 - e^{-beta x})^2 - 1].
double potential(const MorseSystem& sys, double x);

/// Morse spectrum E_n = hbar omega (n + 1/2) - hbar omega chi (n + 1/2)^2.
double energy(const MorseSystem& sys, int n);

/// Spectrum of the deformed Hamiltonian; energy(n) - hbar omega chi / 4.
double deformed_energy(const MorseSystem& sys, int n);

/// xi(x) = (2N + 1) e^{-beta x}.
double morse_variable(const MorseSystem& sys, double x);

/// Normalization constant C_{N,n} of the bound wavefunction.
double norm_const(const MorseSystem& sys, int n);
double log_norm_const(const MorseSystem& sys, int n);

/// psi_{N,n}(x) = C e^{-xi/2} xi^{N-n} L_n^{2N-2n}(xi).
double wavefunction(const MorseSystem& sys, int n, double x);

/// All bound wavefunctions psi_{N,0..N-1}(x) at one point.
std::vector<double> wavefunctions(const MorseSystem& sys, double x);

/// f^2(n) = 1 - chi n.
double deformation_sq(const MorseSystem& sys, int n);

struct LadderCoeffs {
  double down;  ///< <n-1| A |n>
  double up;    ///< <n+1| A^dagger |n>
};

/// Matrix elements of the deformed ladder operators on level n. `up` is
/// also returned for n = N-1 although |N> lies outside the bound basis.
LadderCoeffs ladder_coeffs(const MorseSystem& sys, int n);

/// [A, A^dagger] on level n: 1 - chi (2n + 1).
double commutator_value(const MorseSystem& sys, int n);

/// f(n)! = f(1) f(2) ... f(n), for 0 <= n <= 2N.
double f_factorial(const MorseSystem& sys, int n);

}  // namespace morsewig
