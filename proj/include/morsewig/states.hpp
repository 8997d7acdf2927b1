#pragma once

#include <span>
#include <string>
#include <vector>

#include "morsewig/morse.hpp"
#include "morsewig/specfun.hpp"

namespace morsewig {

/// Amplitudes c_0..c_{N-1} over the bound levels of a Morse system.
/// Immutable once built.
class BoundState {
 public:
  /// Throws DomainError unless coeffs has N finite entries whose squared
  /// norm lies in (0, 1 + 1e-12].
  BoundState(MorseSystem system, std::vector<Complex> coeffs,
             std::string label);

  const MorseSystem& system() const { return system_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  const std::string& label() const { return label_; }

 private:
  MorseSystem system_;
  std::vector<Complex> coeffs_;
  std::string label_;
};

/// zeta = e^{i arg alpha} tan(|alpha| sqrt(chi)).
Complex zeta_from_alpha(const MorseSystem& sys, Complex alpha);

/// Deformed displacement-operator coherent state, truncated to the bound
/// levels and deliberately left unnormalized.
BoundState docs(const MorseSystem& sys, Complex zeta);

/// Deformed photon-added coherent state (A^dagger)^m |zeta>, normalized.
BoundState dpacs(const MorseSystem& sys, Complex zeta, int m);

BoundState eigenstate(const MorseSystem& sys, int n);

/// P(n) = |c_n|^2.
std::vector<double> occupation(const BoundState& state);

double norm_sq(const BoundState& state);

/// sum n P(n) / sum P(n).
double mean_n(const BoundState& state);

/// Smallest |zeta| (with the given phase) whose coherent state has mean
/// level nbar, to 1e-10.
Complex solve_zeta_for_mean(const MorseSystem& sys, double nbar,
                            double phase = 0.0);

/// c_n(t) = exp(-i E_n t / hbar) c_n(0), E_n the deformed spectrum.
BoundState evolve(const BoundState& state, double t);

/// 2 pi / (omega chi).
double revival_period(const MorseSystem& sys);

/// |<a|b>| / (|a| |b|).
double fidelity(const BoundState& a, const BoundState& b);

/// Psi(x) = sum c_n psi_n(x).
Complex position_wavefunction(const BoundState& state, double x);

}  // namespace morsewig
