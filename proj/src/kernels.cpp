#include "kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "morsewig/error.hpp"

namespace morsewig::detail {
namespace {

std::size_t idx(int n) { return static_cast<std::size_t>(n); }

// Smallest power of two >= max(|sigma|, 1). Tables are shared by every
// momentum in the same bucket, so a point and a grid cell see identical
// nodes.
double sigma_bucket(double sigma) {
  const double s = std::abs(sigma);
  if (s <= 1.0) return 1.0;
  int e = 0;
  const double m = std::frexp(s, &e);
  return m == 0.5 ? s : std::ldexp(1.0, e);
}

std::size_t next_pow2(double v) {
  std::size_t m = 1;
  while (static_cast<double>(m) < v) m <<= 1;
  return m;
}

double envelope(const BoundState& state, double x) {
  const MorseSystem& sys = state.system();
  double s = 0.0;
  for (int n = 0; n < sys.n_bound(); ++n) {
    const double c = std::abs(state.coeffs()[idx(n)]);
    if (c != 0.0) s += c * std::abs(wavefunction(sys, n, x));
  }
  return s;
}

}  // namespace

void check_real(Complex s, double x, double p, const char* method) {
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
    std::ostringstream msg;
    msg << method << ": non-finite value at (x, p) = (" << x << ", " << p
        << ")";
    throw ConsistencyError(msg.str());
  }
  if (!(std::abs(s.imag()) < 1e-10 * (1.0 + std::abs(s.real())))) {
    std::ostringstream msg;
    msg << method << ": imaginary residual " << s.imag() << " at (x, p) = ("
        << x << ", " << p << ")";
    throw ConsistencyError(msg.str());
  }
}

std::pair<double, double> envelope_support(const BoundState& state,
                                           double level) {
  const MorseSystem& sys = state.system();
  const double step = 0.25 / sys.beta();
  const double big_n = sys.n_bound();
  auto outside = [&](double x, bool left) {
    const double xi = morse_variable(sys, x);
    const bool tail = left ? xi > 4.0 * big_n + 8.0 : xi < 1.0;
    return tail && envelope(state, x) < level;
  };
  auto scan = [&](bool left) {
    const double dir = left ? -1.0 : 1.0;
    double inner = 0.0;
    double outer = dir * step;
    while (!outside(outer, left)) {
      inner = outer;
      outer += dir * step;
    }
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (inner + outer);
      (envelope(state, mid) < level ? outer : inner) = mid;
    }
    return outer;
  };
  return {scan(true), scan(false)};
}

// ---------------------------------------------------------------------------

ClosedKernel::ClosedKernel(const BoundState& state, const WignerConfig& cfg)
    : n_(state.system().n_bound()),
      hbar_(state.system().hbar()),
      beta_(state.system().beta()),
      tol_(cfg.bessel_rel_tol),
      scaling_(cfg.scaling) {
  const int big_n = n_;
  if (big_n - 1 > specfun::kMaxBesselOrder) {
    throw DomainError("wigner: N exceeds the supported Bessel order bound");
  }
  const auto c = state.coeffs();
  const Wide lbeta = std::log(static_cast<Wide>(beta_));
  const Wide pref = std::log(static_cast<Wide>(2.0)) -
                    std::log(std::numbers::pi_v<Wide> * hbar_) - lbeta;
  auto lfact = [](int n) { return std::lgamma(static_cast<Wide>(n) + 1); };
  auto lbinom = [&](int a, int b) { return lfact(a) - lfact(b) - lfact(a - b); };
  std::vector<Wide> lc(idx(big_n));
  for (int n = 0; n < big_n; ++n) {
    lc[idx(n)] = 0.5L * (std::log(static_cast<Wide>(2.0)) + lfact(n) + lbeta +
                         std::log(static_cast<Wide>(big_n - n)) -
                         lfact(2 * big_n - n));
  }

  // Pass 1 finds the largest log magnitude per xi power; pass 2 sums the
  // coefficients relative to it so that nothing under- or overflows.
  lambda_.assign(idx(2 * big_n + 1), -INFINITY);
  std::vector<std::vector<WideComplex>> acc(
      idx(2 * big_n - 1), std::vector<WideComplex>(idx(2 * big_n + 1)));
  for (int pass = 0; pass < 2; ++pass) {
    for (int n = 0; n < big_n; ++n) {
      if (c[idx(n)] == 0.0) continue;
      for (int k = 0; k < big_n; ++k) {
        if (c[idx(k)] == 0.0) continue;
        const WideComplex cc = WideComplex(c[idx(n)]) * std::conj(WideComplex(c[idx(k)]));
        const Wide base = pref + lc[idx(n)] + lc[idx(k)] + std::log(std::abs(cc));
        const WideComplex phase = cc / std::abs(cc);
        for (int r = 0; r <= k; ++r) {
          const Wide lr = lbinom(2 * big_n - k, k - r) - lfact(r);
          for (int s = 0; s <= n; ++s) {
            const Wide lm = base + lr + lbinom(2 * big_n - n, n - s) - lfact(s);
            const int e = 2 * big_n - n - k + r + s;
            if (pass == 0) {
              lambda_[idx(e)] = std::max(lambda_[idx(e)], lm);
            } else {
              const Wide sign = ((r + s) % 2 == 0) ? 1.0L : -1.0L;
              const int j = r + n - s - k;
              acc[idx(j + big_n - 1)][idx(e)] +=
                  sign * std::exp(lm - lambda_[idx(e)]) * phase;
            }
          }
        }
      }
    }
  }
  terms_.resize(acc.size());
  for (std::size_t j = 0; j < acc.size(); ++j) {
    for (int e = 0; e <= 2 * big_n; ++e) {
      if (acc[j][idx(e)] != WideComplex(0)) terms_[j].push_back({e, acc[j][idx(e)]});
    }
  }
}

ClosedKernel::Column ClosedKernel::column(double x) const {
  Column col;
  col.x = x;
  col.xi = (2.0 * n_ + 1.0) * std::exp(-beta_ * x);
  if (!(col.xi > 0.0) || !std::isfinite(col.xi)) {
    std::ostringstream msg;
    msg << "wigner: Morse variable out of range at x = " << x;
    throw DomainError(msg.str());
  }
  return col;
}

double ClosedKernel::eval(Column& col, double p) const {
  const Complex s = sum(col, p);
  check_real(s, col.x, p, "wigner closed form");
  return s.real();
}

Complex ClosedKernel::sum(Column& col, double p) const {
  const double sigma = -2.0 * p / (hbar_ * beta_);
  const double cap = sigma_bucket(sigma);
  auto it = col.tables.find(cap);
  if (it == col.tables.end()) {
    it = col.tables
             .emplace(cap, specfun::BesselOrderTable(col.xi, n_ - 1, cap, tol_))
             .first;
  }
  const specfun::BesselOrderTable& table = it->second;
  thread_local std::vector<Complex> k;
  k.resize(idx(n_));
  table.eval(sigma, k);

  if (col.poly.empty()) fill_poly(col, table);

  WideComplex total = 0.0L;
  for (int jj = -(n_ - 1); jj <= n_ - 1; ++jj) {
    const WideComplex& poly = col.poly[idx(jj + n_ - 1)];
    if (poly == WideComplex(0)) continue;
    const int j = std::abs(jj);
    const Complex kd = jj >= 0 ? k[idx(j)] : std::conj(k[idx(j)]);
    total += poly * WideComplex(kd.real(), kd.imag());
  }
  return {static_cast<double>(total.real()), static_cast<double>(total.imag())};
}

void ClosedKernel::fill_poly(Column& col,
                             const specfun::BesselOrderTable& table) const {
  const Wide xi = col.xi;
  const Wide log_xi = std::log(xi);
  const bool direct = scaling_ == BesselScaling::direct || xi < 1.0L;
  col.poly.assign(terms_.size(), WideComplex(0));
  for (int jj = -(n_ - 1); jj <= n_ - 1; ++jj) {
    const auto& row = terms_[idx(jj + n_ - 1)];
    if (row.empty()) continue;
    const Wide mu = table.log_scale(std::abs(jj));
    WideComplex poly = 0.0L;
    if (direct) {
      for (const Term& t : row) {
        poly += t.a * (std::exp(lambda_[idx(t.e)]) * std::pow(xi, t.e));
      }
      poly *= std::exp(mu - xi);
    } else {
      for (const Term& t : row) {
        poly += t.a * std::exp(lambda_[idx(t.e)] + t.e * log_xi - xi + mu);
      }
    }
    col.poly[idx(jj + n_ - 1)] = poly;
  }
}

// ---------------------------------------------------------------------------

QuadKernel::QuadKernel(const BoundState& state, const WignerConfig& cfg)
    : state_(&state),
      hbar_(state.system().hbar()),
      quad_points_(cfg.quad_points),
      window_(cfg.quad_window) {
  if (!window_) {
    const auto [lo, hi] = envelope_support(state, 1e-14);
    x_lo_ = lo;
    x_hi_ = hi;
  }
}

QuadKernel::Column QuadKernel::column(double x) const {
  Column col;
  col.x = x;
  if (window_) {
    col.half_window = *window_;
    for (double end : {x - 0.5 * col.half_window, x + 0.5 * col.half_window}) {
      const double a = std::abs(position_wavefunction(*state_, end));
      if (a > 1e-10) {
        std::ostringstream msg;
        msg << "wigner quadrature: window Y = " << col.half_window
            << " too small at x = " << x << " (|Psi| = " << a
            << " at the endpoint)";
        throw AccuracyError(msg.str(), a);
      }
    }
  } else {
    col.half_window = 2.0 * std::max(x_hi_ - x, x - x_lo_);
  }
  return col;
}

void QuadKernel::fill(Column& col, std::size_t nodes) const {
  col.nodes = nodes;
  col.product.resize(nodes + 1);
  const double y_span = 2.0 * col.half_window;
  for (std::size_t i = 0; i <= nodes; ++i) {
    const double y =
        -col.half_window + y_span * (static_cast<double>(i) / nodes);
    col.product[i] = std::conj(position_wavefunction(*state_, col.x - 0.5 * y)) *
                     position_wavefunction(*state_, col.x + 0.5 * y);
  }
}

double QuadKernel::eval(Column& col, double p) const {
  const double y_half = col.half_window;
  const double need = std::max<double>(
      quad_points_,
      32.0 * (1.0 + std::abs(p) * y_half / (std::numbers::pi * hbar_)));
  const std::size_t nodes = next_pow2(need);
  if (col.nodes < nodes) fill(col, nodes);
  const std::size_t stride = col.nodes / nodes;
  const double y_span = 2.0 * y_half;
  Complex sum = 0.0;
  for (std::size_t i = 0; i <= nodes; ++i) {
    const double y = -y_half + y_span * (static_cast<double>(i) / nodes);
    const double ph = -p * y / hbar_;
    Complex term = Complex(std::cos(ph), std::sin(ph)) * col.product[i * stride];
    if (i == 0 || i == nodes) term *= 0.5;
    sum += term;
  }
  sum *= (y_span / nodes) / (2.0 * std::numbers::pi * hbar_);
  check_real(sum, col.x, p, "wigner quadrature");
  return sum.real();
}

}  // namespace morsewig::detail
