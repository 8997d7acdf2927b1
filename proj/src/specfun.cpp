#include "morsewig/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "morsewig/error.hpp"

namespace morsewig::specfun {
namespace {

// Lanczos approximation, g = 607/128, 15 terms.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,
    .15808870322491248884e-3,   -.21026444172410488319e-3,
    .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,
    .36899182659531622704e-5};

// ln Gamma(1 + z) = sum_k c_k z^k, c_1 = -gamma, c_k = (-1)^k zeta(k) / k.
constexpr std::array<double, 30> kLogGammaSeries = {
    -0.5772156649015328606065120900824024, 0.8224670334241132182362076,
    -0.4006856343865314284665794,          0.2705808084277845478790009,
    -0.2073855510286739852662731,          0.1695571769974081899524197,
    -0.1440498967688461181199711,          0.1255096695247430424223357,
    -0.1113342658695646904908725,          0.1000994575127818085337146,
    -0.0909540171458290422326093,          0.0833538405461090040248865,
    -0.07693251641135219147282706,         0.07143294629536133605923275,
    -0.06666870588242046803290345,         0.06250095514121304074198329,
    -0.05882397865868458233895727,         0.05555576762740361110221425,
    -0.05263167937961666073362767,         0.05000004769810169363980566,
    -0.04761907033014222799078396,         0.04545455629320466944240864,
    -0.043478266053040259361351,           0.04166666915034121046914498,
    -0.04000000119214014058609121,         0.03846153903467518570634774,
    -0.03703703731298932554946035,         0.03571428584733335802815918,
    -0.03448275868491930081079479,         0.03333333336437758108065561};

// |z| <= 0.2
double log_gamma_one_plus(double z) {
  double acc = 0.0;
  for (std::size_t k = kLogGammaSeries.size(); k-- > 0;) {
    acc = (acc + kLogGammaSeries[k]) * z;
  }
  return acc;
}

double log_gamma_lanczos(double x) {
  const double z = x - 1.0;
  double sum = kLanczos[0];
  for (std::size_t k = 1; k < kLanczos.size(); ++k) {
    sum += kLanczos[k] / (z + static_cast<double>(k));
  }
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) -
         t + std::log(sum);
}

// Factorials are exact in double up to 22!.
constexpr int kExactFactorialMax = 22;

double exact_factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be finite and > 0, got " +
                      std::to_string(x));
  }
  if (x == std::floor(x) && x <= kExactFactorialMax + 1) {
    return std::log(exact_factorial(static_cast<int>(x) - 1));
  }
  if (std::abs(x - 1.0) <= 0.2) return log_gamma_one_plus(x - 1.0);
  if (std::abs(x - 2.0) <= 0.2) {
    return std::log1p(x - 2.0) + log_gamma_one_plus(x - 2.0);
  }
  if (x < 0.5) return log_gamma_lanczos(x + 1.0) - std::log(x);
  return log_gamma_lanczos(x);
}

double log_factorial(int n) {
  if (n < 0) {
    throw DomainError("log_factorial: negative argument " + std::to_string(n));
  }
  return log_gamma(static_cast<double>(n) + 1.0);
}

double log_binomial(int a, int b) {
  if (b < 0 || b > a) {
    throw DomainError("binomial: need 0 <= b <= a, got a=" +
                      std::to_string(a) + " b=" + std::to_string(b));
  }
  return log_factorial(a) - log_factorial(b) - log_factorial(a - b);
}

double binomial(int a, int b) {
  const double lb = log_binomial(a, b);
  // The multiplicative formula is exact in 128-bit integers while every
  // partial product, a binomial coefficient times at most a, stays below
  // 2^128; the conversion to double then rounds once.
  if (lb < 110.0 * std::numbers::ln2 && a < (1 << 16)) {
    const int k = std::min(b, a - b);
    unsigned __int128 acc = 1;
    for (int i = 1; i <= k; ++i) {
      acc = acc * static_cast<unsigned>(a - k + i) / static_cast<unsigned>(i);
    }
    return static_cast<double>(acc);
  }
  return std::exp(lb);
}

double laguerre(int n, double k, double x) {
  if (n < 0) {
    throw DomainError("laguerre: degree must be >= 0, got " +
                      std::to_string(n));
  }
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + k - x;
  for (int j = 1; j < n; ++j) {
    const double next =
        ((2.0 * j + k + 1.0 - x) * cur - (j + k) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> laguerre_coeffs(int n, int k) {
  if (n < 0 || k < 0) {
    throw DomainError("laguerre_coeffs: need n, k >= 0");
  }
  std::vector<double> a(static_cast<std::size_t>(n) + 1);
  double inv_fact = 1.0;
  for (int m = 0; m <= n; ++m) {
    if (m > 0) inv_fact /= m;
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    a[static_cast<std::size_t>(m)] = sign * binomial(n + k, n - m) * inv_fact;
  }
  return a;
}

}  // namespace morsewig::specfun
