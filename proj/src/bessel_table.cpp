// Shared-node real-axis evaluation of e^x K_{j + i sigma}(x) for many
// orders at one x: K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "morsewig/error.hpp"
#include "morsewig/specfun.hpp"

namespace morsewig::specfun {
namespace {

constexpr int kGaussOrder = 16;
constexpr int kMaxHalvings = 14;

struct GaussRule {
  std::array<double, kGaussOrder> x;
  std::array<double, kGaussOrder> w;
};

// Legendre roots by Newton iteration from the Chebyshev guesses.
GaussRule make_gauss_rule() {
  GaussRule g{};
  const int n = kGaussOrder;
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-17) break;
    }
    g.x[static_cast<std::size_t>(i)] = z;
    g.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return g;
}

const GaussRule& gauss_rule() {
  static const GaussRule rule = make_gauss_rule();
  return rule;
}

// -2 x sinh^2(t/2) = x - x cosh t without cancellation.
double log_weight(double x, double t) {
  const double s = std::sinh(0.5 * t);
  return -2.0 * x * s * s;
}

}  // namespace

BesselOrderTable::BesselOrderTable(double x, int j_max, double sigma_cap,
                                   double tol)
    : x_(x), j_max_(j_max), sigma_cap_(sigma_cap) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("bessel table: x must be finite and > 0");
  }
  if (j_max < 0 || j_max > kMaxBesselOrder) {
    throw DomainError("bessel table: j_max outside 0..128");
  }
  if (!(sigma_cap >= 0.0) || !std::isfinite(sigma_cap)) {
    throw DomainError("bessel table: sigma_cap must be finite and >= 0");
  }
  if (!(tol > 1e-15 && tol <= 1e-3)) {
    throw DomainError("bessel table: tol must lie in (1e-15, 1e-3]");
  }
  mu_.resize(static_cast<std::size_t>(j_max) + 1);
  for (int j = 0; j <= j_max; ++j) {
    const double r = j / x;
    const double ts = std::asinh(r);
    // x - x cosh ts + j ts, with cosh ts - 1 = r^2 / (sqrt(1 + r^2) + 1).
    mu_[static_cast<std::size_t>(j)] =
        j * ts - x * r * r / (std::sqrt(1.0 + r * r) + 1.0);
  }

  const double cut = std::log(1e15) + 40.0;
  const double top = mu_.back();
  const int jm = j_max;
  auto excess = [&](double t) {
    return log_weight(x_, t) + jm * t - top + cut;
  };
  // Beyond the peak asinh(j_max/x) the integrand falls monotonically.
  double lo = std::asinh(jm / x_);
  double hi = lo + 1.0;
  while (excess(hi) > 0.0) {
    lo = hi;
    hi = 2.0 * hi + 1.0;
  }
  for (int it = 0; it < 60 && hi - lo > 1e-6; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  t_max_ = hi;

  // Halve the panel width until two successive tables agree to tol, then
  // keep the finer one. Gauss-Legendre converges geometrically, so its error
  // sits well below the measured difference; the closed-form sums need that
  // margin because they cancel.
  const std::size_t width_j = static_cast<std::size_t>(j_max) + 1;
  std::vector<Complex> ref0(width_j), refs(width_j);
  std::vector<Complex> cur0(width_j), curs(width_j);
  double width = t_max_;
  build(width);
  eval(0.0, ref0);
  eval(sigma_cap, refs);
  double achieved = 0.0;
  for (int level = 0; level < kMaxHalvings; ++level) {
    BesselOrderTable finer = *this;
    finer.build(0.5 * width);
    finer.eval(0.0, cur0);
    finer.eval(sigma_cap, curs);
    achieved = 0.0;
    for (std::size_t j = 0; j < width_j; ++j) {
      const double scale = std::abs(cur0[j]);
      achieved = std::max({achieved, std::abs(cur0[j] - ref0[j]) / scale,
                           std::abs(curs[j] - refs[j]) / scale});
    }
    *this = std::move(finer);
    if (achieved <= tol) return;
    width *= 0.5;
    ref0.swap(cur0);
    refs.swap(curs);
  }
  std::ostringstream msg;
  msg << "bessel table: no convergence at x=" << x << " sigma<=" << sigma_cap
      << " (achieved " << achieved << ")";
  throw AccuracyError(msg.str(), achieved);
}

void BesselOrderTable::build(double width) {
  const double t_max = t_max_;
  const int jm = j_max_;
  const int panels = static_cast<int>(std::ceil(t_max / width - 1e-9));
  const double h = t_max / panels;

  const GaussRule& g = gauss_rule();
  const std::size_t nj = static_cast<std::size_t>(jm) + 1;
  const std::size_t count = static_cast<std::size_t>(panels) * kGaussOrder;
  t_.assign(count, 0.0);
  even_.assign(count * nj, 0.0);
  odd_.assign(count * nj, 0.0);
  std::size_t i = 0;
  for (int p = 0; p < panels; ++p) {
    const double a = p * h;
    for (int k = 0; k < kGaussOrder; ++k, ++i) {
      const double t = a + 0.5 * h * (1.0 + g.x[static_cast<std::size_t>(k)]);
      const double w = 0.5 * h * g.w[static_cast<std::size_t>(k)];
      const double e = log_weight(x_, t);
      t_[i] = t;
      for (std::size_t j = 0; j < nj; ++j) {
        const double up = std::exp(e + j * t - mu_[j]);
        const double down = std::exp(e - j * t - mu_[j]);
        even_[i * nj + j] = 0.5 * w * (up + down);
        odd_[i * nj + j] = 0.5 * w * (up - down);
      }
    }
  }
}

void BesselOrderTable::eval(double sigma, std::span<Complex> out) const {
  const std::size_t nj = static_cast<std::size_t>(j_max_) + 1;
  if (out.size() != nj) {
    throw DomainError("bessel table: output span has the wrong length");
  }
  if (!(std::abs(sigma) <= sigma_cap_ * (1.0 + 1e-12))) {
    throw DomainError("bessel table: |sigma| exceeds the table cap");
  }
  thread_local std::vector<double> re, im;
  re.assign(nj, 0.0);
  im.assign(nj, 0.0);
  for (std::size_t i = 0; i < t_.size(); ++i) {
    const double c = std::cos(sigma * t_[i]);
    const double s = std::sin(sigma * t_[i]);
    const double* ev = &even_[i * nj];
    const double* od = &odd_[i * nj];
    for (std::size_t j = 0; j < nj; ++j) {
      re[j] += ev[j] * c;
      im[j] += od[j] * s;
    }
  }
  for (std::size_t j = 0; j < nj; ++j) out[j] = Complex(re[j], im[j]);
}

}  // namespace morsewig::specfun
