// Modified Bessel function K_nu(x) of complex order on a lifted contour.
//
// K_nu(x) = 1/2 int_{-inf}^{inf} exp(-x cosh t + nu t) dt. For nu = a + i sigma
// (a, sigma >= 0 after symmetry reduction) the contour t = s + i theta(s) is
//   theta(s) = theta_h                      for |s| <= s_b
//   theta(s) = asin(sigma s / (x sinh s))  for |s| >  s_b
// with theta_h the height of the saddle sinh t0 = nu / x, clamped below
// pi/2. For a = 0 the tails are exactly constant-phase paths; the horizontal
// piece passes through the saddle. Both pieces stay inside |Im t| < pi/2,
// where the integrand decays at both ends, so the deformation is exact.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "morsewig/error.hpp"
#include "morsewig/specfun.hpp"

namespace morsewig::specfun {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 2.220446049250313e-16;
constexpr int kMaxIntervals = 6000;

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15).
constexpr double kXgk[8] = {0.991455371120812639206854697526329,
                            0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926,
                            0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013,
                            0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245,
                            0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970,
                            0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518,
                            0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550,
                            0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649,
                            0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082,
                           0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975,
                           0.417959183673469387755102040816327};

class Contour {
 public:
  Contour(double a, double sigma, double x) : a_(a), sigma_(sigma), x_(x) {
    if (sigma_ == 0.0) {
      theta_h_ = 0.0;
      s_b_ = 0.0;
      return;
    }
    const Complex t0 = std::asinh(Complex(a_, sigma_) / x_);
    const double delta = std::min(0.5, 1.0 / std::max(sigma_, 1.0));
    theta_h_ = std::min(std::abs(t0.imag()), kPi / 2 - delta);
    sin_h_ = std::sin(theta_h_);
    ratio_ = sigma_ / x_;
    const double target = sin_h_ / ratio_;  // s / sinh s at the joint
    if (target >= 1.0 - 1e-14) {
      s_b_ = 0.0;
    } else {
      double lo = 0.0;
      double hi = 1.0;
      while (sinhc(hi) > target && hi < 700.0) hi *= 2.0;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (sinhc(mid) > target ? lo : hi) = mid;
      }
      s_b_ = 0.5 * (lo + hi);
    }
  }

  double joint() const { return s_b_; }

  // Location of the integrand maximum on the horizontal piece.
  double peak_guess() const {
    const double c = std::cos(theta_h_);
    double s = std::asinh(a_ / (x_ * std::max(c, 1e-300)));
    if (s_b_ > 0.0) s = std::min(s, s_b_);
    return std::min(s, 700.0);
  }

  // Re of the exponent of the scaled integrand, e^x exp(-x cosh t + nu t).
  double log_magnitude(double s) const {
    double th;
    double dth;
    path(s, th, dth);
    return exponent_re(s, th);
  }

  Complex integrand(double s) const {
    double th;
    double dth;
    path(s, th, dth);
    const double sh = std::sinh(0.5 * s);
    const double st = std::sin(0.5 * th);
    // x - x cosh(s + i th), split to avoid cancellation near the origin.
    const double re = x_ * (2.0 * st * st - 2.0 * sh * sh * std::cos(th)) +
                      a_ * s - sigma_ * th;
    const double im = -x_ * std::sinh(s) * std::sin(th) + sigma_ * s + a_ * th;
    return std::polar(std::exp(re), im) * Complex(1.0, dth);
  }

 private:
  static double sinhc(double s) {
    return std::abs(s) < 1e-4 ? 1.0 + s * s / 6.0 : std::sinh(s) / s;
  }

  double exponent_re(double s, double th) const {
    const double sh = std::sinh(0.5 * s);
    const double st = std::sin(0.5 * th);
    return x_ * (2.0 * st * st - 2.0 * sh * sh * std::cos(th)) + a_ * s -
           sigma_ * th;
  }

  void path(double s, double& th, double& dth) const {
    if (sigma_ == 0.0 || std::abs(s) <= s_b_) {
      th = theta_h_;
      dth = 0.0;
      return;
    }
    double r;
    double dr;
    if (std::abs(s) < 1e-3) {
      const double s2 = s * s;
      r = 1.0 - s2 / 6.0 + 7.0 * s2 * s2 / 360.0;
      dr = -s / 3.0 + 7.0 * s * s2 / 90.0;
    } else {
      const double sh = std::sinh(s);
      r = s / sh;
      dr = (sh - s * std::cosh(s)) / (sh * sh);
    }
    const double q = std::min(ratio_ * r, sin_h_);
    th = std::asin(q);
    dth = ratio_ * dr / std::sqrt(1.0 - q * q);
  }

  double a_;
  double sigma_;
  double x_;
  double theta_h_ = 0.0;
  double sin_h_ = 0.0;
  double ratio_ = 0.0;
  double s_b_ = 0.0;
};

struct Panel {
  double lo;
  double hi;
  Complex value;
  double error;
  double abs_value;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const Contour& c, double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  const Complex fc = c.integrand(mid);
  Complex kron = fc * kWgk[7];
  Complex gauss = fc * kWg[3];
  double absk = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const Complex f1 = c.integrand(mid - dx);
    const Complex f2 = c.integrand(mid + dx);
    kron += (f1 + f2) * kWgk[j];
    absk += (std::abs(f1) + std::abs(f2)) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  return {lo, hi, kron * half, std::abs((kron - gauss) * half), absk * half};
}

// Outward scan until the integrand falls `cut` below the running maximum.
double find_cutoff(const Contour& c, double start, double dir, double& peak,
                   double cut) {
  double s = start;
  double step = 0.125;
  double prev = c.log_magnitude(s);
  peak = std::max(peak, prev);
  for (int it = 0; it < 20000; ++it) {
    s += dir * step;
    if (std::abs(s) > 700.0) break;
    const double v = c.log_magnitude(s);
    peak = std::max(peak, v);
    if (v < peak - cut && v <= prev) break;
    prev = v;
    if (it > 16) step = std::min(step * 1.25, 2.0);
  }
  return s;
}

void check_tolerance(double rel_tol) {
  if (!(rel_tol > 1e-15 && rel_tol <= 1e-3)) {
    throw DomainError("bessel_k: rel_tol must lie in (1e-15, 1e-3]");
  }
}

Complex integrate(double a, double sigma, double x, double rel_tol) {
  const Contour contour(a, sigma, x);
  const double cut = std::log(1.0 / rel_tol) + 40.0;

  const double s_pk = contour.peak_guess();
  double peak = contour.log_magnitude(s_pk);
  const double s_hi = find_cutoff(contour, s_pk, +1.0, peak, cut);
  const double s_lo = find_cutoff(contour, s_pk, -1.0, peak, cut);

  std::vector<double> breaks = {s_lo, s_hi, s_pk};
  for (double b : {contour.joint(), -contour.joint()}) {
    if (b != 0.0 && b > s_lo && b < s_hi) breaks.push_back(b);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const double width = std::min(0.5, kPi / (2.0 * std::max(sigma, 1.0)));
  std::priority_queue<Panel> queue;
  Complex total = 0.0;
  double error = 0.0;
  double abs_total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double len = breaks[i + 1] - breaks[i];
    if (len <= 0.0) continue;
    const int n = std::max(1, static_cast<int>(std::ceil(len / width)));
    for (int j = 0; j < n; ++j) {
      const double lo = breaks[i] + len * j / n;
      const double hi = (j + 1 == n) ? breaks[i + 1] : breaks[i] + len * (j + 1) / n;
      Panel p = gauss_kronrod(contour, lo, hi);
      total += p.value;
      error += p.error;
      abs_total += p.abs_value;
      queue.push(p);
    }
  }

  auto converged = [&] {
    return error <= rel_tol * std::abs(total) ||
           error <= 10.0 * kEps * abs_total;
  };
  while (!converged() && static_cast<int>(queue.size()) < kMaxIntervals) {
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Panel left = gauss_kronrod(contour, worst.lo, mid);
    const Panel right = gauss_kronrod(contour, mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    abs_total += left.abs_value + right.abs_value - worst.abs_value;
    queue.push(left);
    queue.push(right);
  }
  // Re-sum to shed the drift of the incremental updates.
  total = 0.0;
  error = 0.0;
  abs_total = 0.0;
  while (!queue.empty()) {
    total += queue.top().value;
    error += queue.top().error;
    abs_total += queue.top().abs_value;
    queue.pop();
  }
  const double achieved =
      std::max(error, 10.0 * kEps * abs_total) / std::abs(total);
  if (!(achieved <= rel_tol)) {
    std::ostringstream msg;
    msg << "bessel_k: quadrature for order (" << a << "," << sigma
        << ") at x=" << x << " reached relative error " << achieved
        << " > " << rel_tol;
    throw AccuracyError(msg.str(), achieved);
  }
  return 0.5 * total;
}

}  // namespace

Complex bessel_k_scaled(Complex nu, double x, double rel_tol) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("bessel_k: x must be finite and > 0");
  }
  if (!std::isfinite(nu.real()) || !std::isfinite(nu.imag())) {
    throw DomainError("bessel_k: order must be finite");
  }
  if (std::abs(nu.real()) > kMaxBesselOrder) {
    throw DomainError("bessel_k: |Re nu| exceeds the supported bound");
  }
  check_tolerance(rel_tol);

  // K_{-nu} = K_nu and K_{conj nu} = conj K_nu reduce to a, sigma >= 0.
  const double a = std::abs(nu.real());
  const bool flip = (nu.real() < 0.0) != (nu.imag() < 0.0) && nu.imag() != 0.0;
  const double sigma = std::abs(nu.imag());
  const Complex k = integrate(a, sigma, x, rel_tol);
  if (a == 0.0 || sigma == 0.0) return {k.real(), 0.0};
  return flip ? std::conj(k) : k;
}

Complex bessel_k(Complex nu, double x, double rel_tol) {
  return bessel_k_scaled(nu, x, rel_tol) * std::exp(-x);
}

std::vector<Complex> bessel_k_scaled_row(double sigma, double x, int j_max,
                                         double rel_tol) {
  if (j_max < 0) throw DomainError("bessel_k_row: j_max must be >= 0");
  if (j_max > kMaxBesselOrder) {
    throw DomainError("bessel_k_row: j_max exceeds the supported bound");
  }
  std::vector<Complex> row(static_cast<std::size_t>(j_max) + 1);
  row[0] = bessel_k_scaled(Complex(0.0, sigma), x, rel_tol);
  if (j_max == 0) return row;
  row[1] = bessel_k_scaled(Complex(1.0, sigma), x, rel_tol);
  for (int j = 1; j < j_max; ++j) {
    const Complex nu(j, sigma);
    row[static_cast<std::size_t>(j) + 1] =
        row[static_cast<std::size_t>(j) - 1] + (2.0 * nu / x) * row[static_cast<std::size_t>(j)];
  }
  return row;
}

std::vector<Complex> bessel_k_row(double sigma, double x, int j_max,
                                  double rel_tol) {
  std::vector<Complex> row = bessel_k_scaled_row(sigma, x, j_max, rel_tol);
  const double scale = std::exp(-x);
  for (Complex& v : row) v *= scale;
  return row;
}

}  // namespace morsewig::specfun
