#include "morsewig/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "morsewig/error.hpp"

namespace morsewig {
namespace {

std::size_t idx(int n) { return static_cast<std::size_t>(n); }

double sum_norm(std::span<const Complex> c) {
  double s = 0.0;
  for (const Complex& v : c) s += std::norm(v);
  return s;
}

}  // namespace

BoundState::BoundState(MorseSystem system, std::vector<Complex> coeffs,
                       std::string label)
    : system_(system), coeffs_(std::move(coeffs)), label_(std::move(label)) {
  if (coeffs_.size() != idx(system_.n_bound())) {
    throw DomainError("BoundState: expected " +
                      std::to_string(system_.n_bound()) + " coefficients, got " +
                      std::to_string(coeffs_.size()));
  }
  for (const Complex& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw DomainError("BoundState: non-finite coefficient");
    }
  }
  const double s = sum_norm(coeffs_);
  if (!(s > 0.0) || s > 1.0 + 1e-12) {
    throw DomainError("BoundState: squared norm " + std::to_string(s) +
                      " outside (0, 1]");
  }
}

Complex zeta_from_alpha(const MorseSystem& sys, Complex alpha) {
  const double arg = std::abs(alpha) * std::sqrt(sys.chi());
  if (!(arg < std::numbers::pi / 2)) {
    throw DomainError("zeta_from_alpha: |alpha| sqrt(chi) must be < pi/2");
  }
  return std::polar(std::tan(arg), std::arg(alpha));
}

BoundState docs(const MorseSystem& sys, Complex zeta) {
  if (!std::isfinite(zeta.real()) || !std::isfinite(zeta.imag())) {
    throw DomainError("docs: zeta must be finite");
  }
  const int big_n = sys.n_bound();
  std::vector<Complex> c(idx(big_n));
  const double r = std::abs(zeta);
  if (r == 0.0) {
    c[0] = 1.0;
    return BoundState(sys, std::move(c), "docs");
  }
  const double phase = std::arg(zeta);
  const double log_den = big_n * std::log1p(r * r);
  for (int n = 0; n < big_n; ++n) {
    const double lm =
        0.5 * specfun::log_binomial(2 * big_n, n) + n * std::log(r) - log_den;
    c[idx(n)] = std::polar(std::exp(lm), n * phase);
  }
  return BoundState(sys, std::move(c), "docs");
}

BoundState dpacs(const MorseSystem& sys, Complex zeta, int m) {
  const int big_n = sys.n_bound();
  if (m < 0 || m >= big_n) {
    throw DomainError("dpacs: m must lie in 0.." + std::to_string(big_n - 1));
  }
  if (!std::isfinite(zeta.real()) || !std::isfinite(zeta.imag())) {
    throw DomainError("dpacs: zeta must be finite");
  }
  const std::string label = "dpacs:m=" + std::to_string(m);
  std::vector<Complex> c(idx(big_n));
  const double r = std::abs(zeta);
  if (r == 0.0) {
    c[idx(m)] = 1.0;
    return BoundState(sys, std::move(c), label);
  }
  const int count = big_n - m;
  std::vector<double> lm(idx(count));
  for (int n = 0; n < count; ++n) {
    lm[idx(n)] = 0.5 * specfun::log_binomial(2 * big_n, n + m) +
                 specfun::log_factorial(n + m) - specfun::log_factorial(n) +
                 n * std::log(r);
  }
  const double top = *std::max_element(lm.begin(), lm.end());
  double total = 0.0;
  for (double& v : lm) {
    v = std::exp(v - top);
    total += v * v;
  }
  const double scale = 1.0 / std::sqrt(total);
  const double phase = std::arg(zeta);
  for (int n = 0; n < count; ++n) {
    c[idx(n + m)] = std::polar(lm[idx(n)] * scale, n * phase);
  }
  return BoundState(sys, std::move(c), label);
}

BoundState eigenstate(const MorseSystem& sys, int n) {
  if (n < 0 || n >= sys.n_bound()) {
    throw DomainError("eigenstate: level " + std::to_string(n) +
                      " outside 0.." + std::to_string(sys.n_bound() - 1));
  }
  std::vector<Complex> c(idx(sys.n_bound()));
  c[idx(n)] = 1.0;
  return BoundState(sys, std::move(c), "eigen:n=" + std::to_string(n));
}

std::vector<double> occupation(const BoundState& state) {
  std::vector<double> p;
  p.reserve(state.coeffs().size());
  for (const Complex& c : state.coeffs()) p.push_back(std::norm(c));
  return p;
}

double norm_sq(const BoundState& state) { return sum_norm(state.coeffs()); }

double mean_n(const BoundState& state) {
  double s = 0.0;
  double w = 0.0;
  int n = 0;
  for (const Complex& c : state.coeffs()) {
    const double p = std::norm(c);
    s += p;
    w += n * p;
    ++n;
  }
  if (!(s > 0.0)) throw DomainError("mean_n: zero state");
  return w / s;
}

Complex solve_zeta_for_mean(const MorseSystem& sys, double nbar,
                            double phase) {
  const int big_n = sys.n_bound();
  if (!(nbar >= 0.0) || !(nbar < big_n - 1.0)) {
    throw DomainError("solve_zeta_for_mean: need 0 <= nbar < N-1");
  }
  if (nbar == 0.0) return 0.0;
  auto mean_at = [&](double t) { return mean_n(docs(sys, t)); };
  double lo = 0.0;
  double hi = 2.0 * std::sqrt(nbar / (2.0 * big_n - nbar));
  while (mean_at(hi) < nbar) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e150) {
      throw DomainError("solve_zeta_for_mean: cannot bracket nbar");
    }
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    t = 0.5 * (lo + hi);
    const double d = mean_at(t) - nbar;
    if (std::abs(d) < 1e-12 || hi - lo <= 4e-16 * hi) break;
    (d < 0.0 ? lo : hi) = t;
  }
  return std::polar(t, phase);
}

BoundState evolve(const BoundState& state, double t) {
  const MorseSystem& sys = state.system();
  std::vector<Complex> c(state.coeffs().begin(), state.coeffs().end());
  for (int n = 0; n < sys.n_bound(); ++n) {
    const double ph = -deformed_energy(sys, n) * t / sys.hbar();
    c[idx(n)] *= Complex(std::cos(ph), std::sin(ph));
  }
  return BoundState(sys, std::move(c), state.label());
}

double revival_period(const MorseSystem& sys) {
  return 2.0 * std::numbers::pi / (sys.omega() * sys.chi());
}

double fidelity(const BoundState& a, const BoundState& b) {
  if (!(a.system() == b.system())) {
    throw DomainError("fidelity: states belong to different systems");
  }
  Complex ov = 0.0;
  for (std::size_t n = 0; n < a.coeffs().size(); ++n) {
    ov += std::conj(a.coeffs()[n]) * b.coeffs()[n];
  }
  const double f = std::abs(ov) / std::sqrt(norm_sq(a) * norm_sq(b));
  return std::min(f, 1.0);
}

Complex position_wavefunction(const BoundState& state, double x) {
  const MorseSystem& sys = state.system();
  Complex psi = 0.0;
  for (int n = 0; n < sys.n_bound(); ++n) {
    const Complex c = state.coeffs()[idx(n)];
    if (c != 0.0) psi += c * wavefunction(sys, n, x);
  }
  return psi;
}

}  // namespace morsewig
