#include "morsewig/morse.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "morsewig/error.hpp"
#include "morsewig/specfun.hpp"

namespace morsewig {
namespace {

void check_level(const MorseSystem& sys, int n, const char* what) {
  if (n < 0 || n >= sys.n_bound()) {
    throw DomainError(std::string(what) + ": level " + std::to_string(n) +
                      " outside 0.." + std::to_string(sys.n_bound() - 1));
  }
}

void check_nonnegative(int n, const char* what) {
  if (n < 0) {
    throw DomainError(std::string(what) + ": level must be >= 0");
  }
}

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

MorseSystem::MorseSystem(int n_bound, double hbar, double omega, double mass)
    : n_bound_(n_bound),
      hbar_(hbar),
      omega_(omega),
      mass_(mass),
      chi_(1.0 / (2.0 * n_bound + 1.0)),
      beta_(std::sqrt(2.0 * mass * omega * chi_ / hbar)),
      depth_(hbar * omega / (4.0 * chi_)) {}

MorseSystem MorseSystem::make(int n_bound, double hbar, double omega,
                              double mass) {
  if (n_bound < 2) {
    throw DomainError("make_system: need at least 2 bound states, got " +
                      std::to_string(n_bound));
  }
  if (!positive_finite(hbar) || !positive_finite(omega) ||
      !positive_finite(mass)) {
    throw DomainError("make_system: hbar, omega and mass must be positive");
  }
  return MorseSystem(n_bound, hbar, omega, mass);
}

MorseSystem make_system(int n_bound, double hbar, double omega, double mass) {
  return MorseSystem::make(n_bound, hbar, omega, mass);
}

double potential(const MorseSystem& sys, double x) {
  const double u = 1.0 - std::exp(-sys.beta() * x);
  return sys.depth() * (u * u - 1.0);
}

double energy(const MorseSystem& sys, int n) {
  check_level(sys, n, "energy");
  const double v = n + 0.5;
  return sys.hbar() * sys.omega() * (v - sys.chi() * v * v);
}

double deformed_energy(const MorseSystem& sys, int n) {
  check_level(sys, n, "deformed_energy");
  const double v = n + 0.5;
  return sys.hbar() * sys.omega() *
         (v - sys.chi() * v * v - sys.chi() / 4.0);
}

double morse_variable(const MorseSystem& sys, double x) {
  return (2.0 * sys.n_bound() + 1.0) * std::exp(-sys.beta() * x);
}

double log_norm_const(const MorseSystem& sys, int n) {
  check_level(sys, n, "norm_const");
  const int big_n = sys.n_bound();
  return 0.5 * (std::numbers::ln2 + specfun::log_factorial(n) +
                std::log(sys.beta()) + std::log(big_n - n) -
                specfun::log_gamma(2.0 * big_n - n + 1.0));
}

double norm_const(const MorseSystem& sys, int n) {
  return std::exp(log_norm_const(sys, n));
}

double wavefunction(const MorseSystem& sys, int n, double x) {
  const double lc = log_norm_const(sys, n);
  const int big_n = sys.n_bound();
  const double xi = morse_variable(sys, x);
  const double log_part = lc - 0.5 * xi + (big_n - n) * std::log(xi);
  // |L_n^k(xi)| <= C(n+k, n) (1 + xi)^n bounds the polynomial factor.
  if (log_part + specfun::log_binomial(2 * big_n - n, n) +
          n * std::log1p(xi) <
      -745.0) {
    return 0.0;
  }
  return std::exp(log_part) * specfun::laguerre(n, 2.0 * (big_n - n), xi);
}

std::vector<double> wavefunctions(const MorseSystem& sys, double x) {
  std::vector<double> out(static_cast<std::size_t>(sys.n_bound()));
  for (int n = 0; n < sys.n_bound(); ++n) {
    out[static_cast<std::size_t>(n)] = wavefunction(sys, n, x);
  }
  return out;
}

double deformation_sq(const MorseSystem& sys, int n) {
  check_nonnegative(n, "deformation_sq");
  return 1.0 - sys.chi() * n;
}

LadderCoeffs ladder_coeffs(const MorseSystem& sys, int n) {
  check_level(sys, n, "ladder_coeffs");
  return {std::sqrt(n * deformation_sq(sys, n)),
          std::sqrt((n + 1.0) * deformation_sq(sys, n + 1))};
}

double commutator_value(const MorseSystem& sys, int n) {
  check_nonnegative(n, "commutator_value");
  return 1.0 - sys.chi() * (2.0 * n + 1.0);
}

double f_factorial(const MorseSystem& sys, int n) {
  const int two_n = 2 * sys.n_bound();
  if (n < 0 || n > two_n) {
    throw DomainError("f_factorial: need 0 <= n <= 2N, got " +
                      std::to_string(n));
  }
  return std::exp(0.5 * (specfun::log_factorial(two_n) -
                         n * std::log(two_n + 1.0) -
                         specfun::log_factorial(two_n - n)));
}

}  // namespace morsewig
